//! Ricci flow `∂_t g = -2 Ric(g)` for a Riemannian metric on a 3-manifold,
//! with the determinant cleared so that the equations are polynomial.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;

use super::poly::{DiffPoly, MultiIndex, Var};
use super::sample::{sample_points, SamplingConfig};
use super::system::PdeSystem;

const DIM: usize = 3;

/// Position of `g_ij` among the dependent variables `g11 g12 g13 g22 g23 g33`.
fn component(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    [[0, 1, 2], [1, 3, 4], [2, 4, 5]][a][b]
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Builds the system `Δ² ∂_t g_ij + 2 Δ² Ric_ij = 0`, `Δ = det g`, with the
/// exclusion `Δ != 0`. Independent variables are `t, x, y, z`.
pub fn ricci_flow_system() -> Result<PdeSystem> {
    let g = |i: usize, j: usize| DiffPoly::jet(component(i, j), MultiIndex::zero());
    // spatial direction a is independent variable a + 1
    let d = |p: &DiffPoly, a: usize| p.total_derivative(a + 1);
    let adj = |k: usize, l: usize| {
        let (r0, r1) = ((k + 1) % DIM, (k + 2) % DIM);
        let (c0, c1) = ((l + 1) % DIM, (l + 2) % DIM);
        // cofactor of (l, k), transposed for the adjugate
        &(&g(c0, r0) * &g(c1, r1)) - &(&g(c0, r1) * &g(c1, r0))
    };
    let det = (0..DIM).fold(DiffPoly::zero(), |acc, l| &acc + &(&g(0, l) * &adj(l, 0)));
    let half = BigRational::new(1.into(), 2.into());
    // Γ̃^k_ij = ½ adj^{kl} (∂_i g_jl + ∂_j g_il - ∂_l g_ij), so Γ = Γ̃ / Δ
    let mut gamma = vec![vec![vec![DiffPoly::zero(); DIM]; DIM]; DIM];
    for (k, gk) in gamma.iter_mut().enumerate() {
        for i in 0..DIM {
            for j in 0..DIM {
                let mut s = DiffPoly::zero();
                for l in 0..DIM {
                    let bracket = &(&d(&g(j, l), i) + &d(&g(i, l), j)) - &d(&g(i, j), l);
                    s = &s + &(&adj(k, l) * &bracket);
                }
                gk[i][j] = s.scale(&half);
            }
        }
    }
    let ddet: Vec<DiffPoly> = (0..DIM).map(|a| d(&det, a)).collect();
    let det2 = det.pow(2);
    let mut equations = Vec::new();
    for i in 0..DIM {
        for j in i..DIM {
            // Δ² Ric_ij = Δ(∂_k Γ̃^k_ij - ∂_j Γ̃^k_ik) - (Γ̃^k_ij ∂_k Δ - Γ̃^k_ik ∂_j Δ)
            //            + Γ̃^k_kl Γ̃^l_ij - Γ̃^k_jl Γ̃^l_ik
            let mut lin = DiffPoly::zero();
            let mut rest = DiffPoly::zero();
            for k in 0..DIM {
                lin = &(&lin + &d(&gamma[k][i][j], k)) - &d(&gamma[k][i][k], j);
                rest = &(&rest - &(&gamma[k][i][j] * &ddet[k])) + &(&gamma[k][i][k] * &ddet[j]);
                for l in 0..DIM {
                    rest = &(&rest + &(&gamma[k][k][l] * &gamma[l][i][j])) - &(&gamma[k][j][l] * &gamma[l][i][k]);
                }
            }
            let ric = &(&det * &lin) + &rest;
            let gt = DiffPoly::jet(component(i, j), MultiIndex::unit(0));
            equations.push(&(&det2 * &gt) + &ric.scale(&q(2)));
        }
    }
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    PdeSystem::new(
        "Ricci flow",
        names(&["t", "x", "y", "z"]),
        names(&["g11", "g12", "g13", "g22", "g23", "g33"]),
        2,
        equations,
        vec![det],
    )
}

/// Whether the top-order symbol of a system is constant on the fibers over
/// the order `k - 1` jets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberConstancy {
    /// No `∂F/∂y_top` contains a top-order coordinate.
    pub symbol_free_of_top_order: bool,
    /// The symbol matrices agree at sample pairs differing only in top-order coordinates.
    pub samples_agree: bool,
    pub sample_pairs: usize,
}

impl FiberConstancy {
    pub fn holds(&self) -> bool {
        self.symbol_free_of_top_order && self.samples_agree
    }
}

pub fn symbol_fiber_constancy(s: &PdeSystem, config: &SamplingConfig) -> Result<FiberConstancy> {
    let k = s.order();
    let top = s.jet_variables(k);
    let symbol: Vec<Vec<DiffPoly>> = s.equations().iter().map(|f| top.iter().map(|v| f.partial(v)).collect()).collect();
    let is_top = |v: &Var| v.jet_order() == Some(k);
    let free = symbol.iter().flatten().all(|p| !p.variables().iter().any(is_top));

    let a = sample_points(s, k, config)?;
    let b = sample_points(s, k, &SamplingConfig { seed: config.seed.wrapping_add(1), samples: config.samples })?;
    let mut agree = true;
    for (pa, pb) in a.points.iter().zip(&b.points) {
        let mut mixed = pa.clone();
        for v in &top {
            mixed.set(*v, pb.get(v));
        }
        agree &= symbol.iter().flatten().all(|p| pa.eval(p) == mixed.eval(p));
    }
    Ok(FiberConstancy { symbol_free_of_top_order: free, samples_agree: agree, sample_pairs: a.points.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::sample::Point;
    use num_traits::Zero;

    #[test]
    fn flat_metric_is_a_solution() {
        let s = ricci_flow_system().unwrap();
        let mut pt = Point::default();
        for (j, diag) in [1, 0, 0, 1, 0, 1].iter().enumerate() {
            pt.set(Var::jet(j, MultiIndex::zero()), q(*diag));
        }
        assert!(s.equations().iter().all(|f| pt.eval(f).is_zero()));
        assert!(!pt.eval(&s.exclusions()[0]).is_zero());
    }

    fn jet(c: usize, dirs: &[usize]) -> Var {
        Var::jet(c, MultiIndex::from_directions(dirs))
    }

    #[test]
    fn polar_coordinates_are_flat() {
        // g = dx² + x² dy² + dz² at x = 3
        let s = ricci_flow_system().unwrap();
        let mut pt = Point::default();
        pt.set(jet(0, &[]), q(1));
        pt.set(jet(5, &[]), q(1));
        pt.set(jet(3, &[]), q(9));
        pt.set(jet(3, &[1]), q(6));
        pt.set(jet(3, &[1, 1]), q(2));
        assert!(s.equations().iter().all(|f| pt.eval(f).is_zero()));
    }

    #[test]
    fn round_sphere_times_line() {
        // g = dx² + dy² + sin²(y) dz², Ric = diag(0, 1, sin² y); sin y = 3/5
        let s = ricci_flow_system().unwrap();
        let (sn, cs) = (BigRational::new(3.into(), 5.into()), BigRational::new(4.into(), 5.into()));
        let mut pt = Point::default();
        pt.set(jet(0, &[]), q(1));
        pt.set(jet(3, &[]), q(1));
        pt.set(jet(5, &[]), &sn * &sn);
        pt.set(jet(5, &[2]), q(2) * &sn * &cs);
        pt.set(jet(5, &[2, 2]), q(2) * (&cs * &cs - &sn * &sn));
        pt.set(jet(3, &[0]), q(-2));
        pt.set(jet(5, &[0]), q(-2) * &sn * &sn);
        assert!(s.equations().iter().all(|f| pt.eval(f).is_zero()));
        pt.set(jet(3, &[0]), q(0));
        assert!(!s.equations().iter().all(|f| pt.eval(f).is_zero()));
    }

    #[test]
    fn adjugate_indexing_is_symmetric() {
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(component(i, j), component(j, i));
            }
        }
    }
}

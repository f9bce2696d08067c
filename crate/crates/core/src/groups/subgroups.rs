use std::collections::{BTreeSet, HashSet};

use super::{iso_type_name, FiniteMatrixGroup};

/// One subgroup of a finite matrix group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupRecord {
    pub iso_name: String,
    pub order: usize,
    pub index: usize,
    pub element_indices: BTreeSet<usize>,
}

type Bits = Vec<u64>;

fn bits_of(n: usize, items: impl IntoIterator<Item = usize>) -> Bits {
    let mut b = vec![0u64; n.div_ceil(64)];
    for i in items {
        b[i / 64] |= 1 << (i % 64);
    }
    b
}

fn has(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn members(b: &Bits, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| has(b, i)).collect()
}

/// Smallest subgroup containing `seed`, closed by right-multiplying with `gens`.
fn closure(g: &FiniteMatrixGroup, seed: &[usize], gens: &[usize]) -> Bits {
    let n = g.order();
    let mut set = bits_of(n, [0]);
    let mut queue = vec![0usize];
    for &s in seed {
        if !has(&set, s) {
            set[s / 64] |= 1 << (s % 64);
            queue.push(s);
        }
    }
    while let Some(x) = queue.pop() {
        for &h in gens {
            let y = g.mul(x, h);
            if !has(&set, y) {
                set[y / 64] |= 1 << (y % 64);
                queue.push(y);
            }
        }
    }
    set
}

/// Every subgroup of `g`, sorted by descending order.
///
/// Subgroups are grown from cyclic ones by repeatedly joining with a cyclic
/// subgroup until no new subgroup appears; each subgroup is reported once.
pub fn enumerate_subgroups(g: &FiniteMatrixGroup) -> Vec<SubgroupRecord> {
    let n = g.order();
    let mut cyclic: Vec<(usize, Bits)> = Vec::new();
    let mut seen_cyclic: HashSet<Bits> = HashSet::new();
    for a in 0..n {
        let c = closure(g, &[a], &[a]);
        if seen_cyclic.insert(c.clone()) {
            cyclic.push((a, c));
        }
    }
    let mut all: HashSet<Bits> = seen_cyclic.clone();
    let mut frontier: Vec<(Vec<usize>, Bits)> = cyclic.iter().map(|(a, c)| (vec![*a], c.clone())).collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (gens, h) in &frontier {
            for (a, c) in &cyclic {
                if has(h, *a) || c.iter().zip(h).all(|(x, y)| x & !y == 0) {
                    continue;
                }
                let mut new_gens = gens.clone();
                new_gens.push(*a);
                let joined = closure(g, &members(h, n), &new_gens);
                if all.insert(joined.clone()) {
                    next.push((new_gens, joined));
                }
            }
        }
        frontier = next;
    }

    let mut records: Vec<SubgroupRecord> = all
        .into_iter()
        .map(|b| {
            let elems = members(&b, n);
            let sub = g.subgroup(elems.iter().copied()).expect("subgroup of a finite group closes");
            SubgroupRecord {
                iso_name: iso_type_name(&sub),
                order: elems.len(),
                index: n / elems.len(),
                element_indices: elems.into_iter().collect(),
            }
        })
        .collect();
    records.sort_by(|a, b| b.order.cmp(&a.order).then_with(|| a.element_indices.cmp(&b.element_indices)));
    records
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::point_group;

    fn shape(name: &str) -> Vec<(usize, usize)> {
        enumerate_subgroups(&point_group(name).unwrap()).iter().map(|r| (r.order, r.index)).collect()
    }

    #[test]
    fn cyclic_four() {
        assert_eq!(shape("C_4"), vec![(4, 1), (2, 2), (1, 4)]);
    }

    #[test]
    fn cyclic_three_has_no_order_two() {
        assert_eq!(shape("C_3"), vec![(3, 1), (1, 3)]);
    }

    #[test]
    fn trivial() {
        assert_eq!(shape("C_1"), vec![(1, 1)]);
    }

    #[test]
    fn full_octahedral_count() {
        // O_h has 98 subgroups
        assert_eq!(shape("O_h").len(), 98);
    }
}

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::config::{verify_fano, verify_onan, FanoConfig, FanoFlag, OnanConfig};
use crate::error::Result;
use crate::gf::ExtField;
use crate::plane::{join, meet};

use super::{with_threads, UnitalIncidence};

/// Result of a (possibly budgeted) search for Fano planes with no line
/// through the special point.
#[derive(Clone, Debug)]
pub struct OrdinarySearch {
    pub planes: Vec<FanoConfig>,
    /// Line pairs `(ℓ1, ℓ2)` visited.
    pub pairs_visited: u64,
    /// Line pairs an unbudgeted search visits.
    pub pairs_total: u64,
    /// Accepted candidates before deduplication.
    pub raw_hits: u64,
}

impl OrdinarySearch {
    pub fn exhaustive(&self) -> bool {
        self.pairs_visited == self.pairs_total
    }
}

/// For each secant ℓ1 missing the special point, each point A on it and
/// each other such secant ℓ2 through A, tries every `{B, C} ⊂ ℓ1 \ A` and
/// `{D, E} ⊂ ℓ2 \ A`; the last two points are forced as `BD ∩ CE` and
/// `BE ∩ CD`. Pairs are visited in a fixed order and `budget` caps how many.
pub fn search_ordinary_fanos(
    field: &ExtField,
    inc: &UnitalIncidence,
    budget: Option<u64>,
    threads: Option<usize>,
) -> Result<OrdinarySearch> {
    let special = inc.special_point();
    let avoiding: Vec<u32> = (0..inc.secants().len() as u32)
        .filter(|&l| inc.secant_avoids_special(l))
        .collect();
    let partners = |l1: u32, a: u32| {
        inc.secants_through(a)
            .iter()
            .copied()
            .filter(move |&l2| l2 != l1 && inc.secant_avoids_special(l2))
    };
    let per_line: Vec<u64> = avoiding
        .iter()
        .map(|&l1| {
            inc.secant_points(l1)
                .iter()
                .map(|&a| partners(l1, a).count() as u64)
                .sum()
        })
        .collect();
    let pairs_total: u64 = per_line.iter().sum();
    let mut remaining = budget.unwrap_or(u64::MAX);
    let caps: Vec<u64> = per_line
        .iter()
        .map(|&c| {
            let take = c.min(remaining);
            remaining -= take;
            take
        })
        .collect();

    let work = |(l1, cap): (u32, u64)| -> (u64, Vec<FanoConfig>) {
        let mut visited = 0u64;
        let mut found = Vec::new();
        let pts1 = inc.secant_points(l1);
        'outer: for &a in pts1 {
            for l2 in partners(l1, a) {
                if visited == cap {
                    break 'outer;
                }
                visited += 1;
                let rest1: Vec<u32> = pts1.iter().copied().filter(|&p| p != a).collect();
                let rest2: Vec<u32> = inc.secant_points(l2).iter().copied().filter(|&p| p != a).collect();
                for (i, &b) in rest1.iter().enumerate() {
                    for &c in &rest1[i + 1..] {
                        let (pb, pc) = (inc.point(b), inc.point(c));
                        for (j, &d) in rest2.iter().enumerate() {
                            for &e in &rest2[j + 1..] {
                                let (pd, pe) = (inc.point(d), inc.point(e));
                                let forced = |x, y, z, w| -> Option<crate::plane::Point> {
                                    let l = join(field, x, y).ok()?;
                                    let m = join(field, z, w).ok()?;
                                    meet(field, &l, &m).ok()
                                };
                                let Some(pf) = forced(&pb, &pd, &pc, &pe) else { continue };
                                let Some(pg) = forced(&pb, &pe, &pc, &pd) else { continue };
                                if !inc.contains(&pf) || !inc.contains(&pg) {
                                    continue;
                                }
                                let pts = [inc.point(a), pb, pc, pd, pe, pf, pg];
                                if let Ok(fano) = verify_fano(field, &pts, |p| inc.contains(p), &special) {
                                    if fano.flag() == FanoFlag::BmOrdinary {
                                        found.push(fano);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        (visited, found)
    };

    let jobs: Vec<(u32, u64)> = avoiding.iter().copied().zip(caps).filter(|&(_, cap)| cap > 0).collect();
    let results: Vec<(u64, Vec<FanoConfig>)> = with_threads(threads, || jobs.par_iter().map(|&j| work(j)).collect())?;
    let pairs_visited = results.iter().map(|r| r.0).sum();
    let raw_hits = results.iter().map(|r| r.1.len() as u64).sum();
    let planes: BTreeSet<FanoConfig> = results.into_iter().flat_map(|r| r.1).collect();
    Ok(OrdinarySearch {
        planes: planes.into_iter().collect(),
        pairs_visited,
        pairs_total,
        raw_hits,
    })
}

/// All O'Nan configurations of secants. A configuration is reached from one
/// of its lines ℓ1 and the three vertices `A < B < C` on it: ℓ2 through A
/// and ℓ3 through B meet in a unital point X, and ℓ4 joins C to a third
/// unital point Y of ℓ2.
pub fn enumerate_onans(field: &ExtField, inc: &UnitalIncidence, threads: Option<usize>) -> Result<Vec<OnanConfig>> {
    let work = |l1: u32| -> Vec<OnanConfig> {
        let mut found = Vec::new();
        let pts = inc.secant_points(l1);
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate().skip(i + 1) {
                for &c in &pts[j + 1..] {
                    let pc = inc.point(c);
                    for &l2 in inc.secants_through(a).iter().filter(|&&l| l != l1) {
                        for &l3 in inc.secants_through(b).iter().filter(|&&l| l != l1) {
                            let (s2, s3) = (inc.secant(l2), inc.secant(l3));
                            let Ok(x) = meet(field, &s2, &s3) else { continue };
                            if !inc.contains(&x) {
                                continue;
                            }
                            for &y in inc.secant_points(l2) {
                                let py = inc.point(y);
                                if y == a || py == x {
                                    continue;
                                }
                                let Ok(s4) = join(field, &pc, &py) else { continue };
                                let Ok(z) = meet(field, &s4, &s3) else { continue };
                                if !inc.contains(&z) {
                                    continue;
                                }
                                let lines = [inc.secant(l1), s2, s3, s4];
                                if let Ok(o) = verify_onan(field, lines, |p| inc.contains(p)) {
                                    found.push(o);
                                }
                            }
                        }
                    }
                }
            }
        }
        found
    };
    let ids: Vec<u32> = (0..inc.secants().len() as u32).collect();
    let results: Vec<Vec<OnanConfig>> = with_threads(threads, || ids.par_iter().map(|&l| work(l)).collect())?;
    let set: BTreeSet<OnanConfig> = results.into_iter().flatten().collect();
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::ExtElem;
    use crate::unital::{OrthogonalBm, Unital};
    use std::sync::Arc;

    #[test]
    fn classical_q4_has_no_onan() {
        let f = Arc::new(ExtField::orthogonal(2).unwrap());
        let u = OrthogonalBm::classical(f.clone()).unwrap();
        let inc = UnitalIncidence::build(&f, &u.point_set());
        assert!(enumerate_onans(&f, &inc, None).unwrap().is_empty());
        let s = search_ordinary_fanos(&f, &inc, None, None).unwrap();
        assert!(s.planes.is_empty());
        assert!(s.exhaustive());
    }

    #[test]
    fn budget_is_deterministic() {
        let f = Arc::new(ExtField::orthogonal(2).unwrap());
        let u = OrthogonalBm::new(f.clone(), ExtElem::ONE, f.delta()).unwrap();
        let inc = UnitalIncidence::build(&f, &u.point_set());
        let a = search_ordinary_fanos(&f, &inc, Some(1000), Some(1)).unwrap();
        let b = search_ordinary_fanos(&f, &inc, Some(1000), Some(4)).unwrap();
        assert_eq!(a.pairs_visited, 1000);
        assert!(!a.exhaustive());
        assert_eq!(a.planes, b.planes);
        let full = search_ordinary_fanos(&f, &inc, None, None).unwrap();
        assert!(full.exhaustive());
        assert!(a.planes.iter().all(|p| full.planes.contains(p)));
    }
}

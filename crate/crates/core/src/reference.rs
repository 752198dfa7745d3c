//! Brute-force enumerators used as oracles for the structured searches.
//! They are exhaustive and only practical for q = 4.

use crate::config::{verify_fano, FanoConfig, FanoFlag};
use crate::discovery::UnitalIncidence;
use crate::error::{Error, Result};
use crate::gf::ExtField;
use crate::plane::{incident, Line, Point};

/// Every Fano plane of the unital, found from its smallest point: three
/// secants through it each contribute two larger points, and the seven
/// points must span exactly seven lines.
pub fn all_fanos(field: &ExtField, inc: &UnitalIncidence) -> Result<Vec<FanoConfig>> {
    let n = inc.points().len();
    if n > 1 << 12 {
        return Err(Error::UnsupportedOrder(field.q()));
    }
    let table = inc.pair_table();
    let line = |a: u32, b: u32| table[a as usize * n + b as usize];
    let special = inc.special_point();
    let mut out = Vec::new();
    for p1 in 0..n as u32 {
        // pairs of larger points on each secant through p1
        let options: Vec<Vec<(u32, u32)>> = inc
            .secants_through(p1)
            .iter()
            .map(|&l| {
                let later: Vec<u32> = inc.secant_points(l).iter().copied().filter(|&x| x > p1).collect();
                let mut pairs = Vec::new();
                for (i, &a) in later.iter().enumerate() {
                    for &b in &later[i + 1..] {
                        pairs.push((a, b));
                    }
                }
                pairs
            })
            .collect();
        let k = options.len();
        for i in 0..k {
            for j in i + 1..k {
                for l in j + 1..k {
                    for &(a, b) in &options[i] {
                        for &(c, d) in &options[j] {
                            for &(e, g) in &options[l] {
                                let pts = [p1, a, b, c, d, e, g];
                                let mut ids = [0u32; 21];
                                let mut t = 0;
                                for x in 0..7 {
                                    for y in x + 1..7 {
                                        ids[t] = line(pts[x], pts[y]);
                                        t += 1;
                                    }
                                }
                                ids.sort_unstable();
                                let mut distinct = ids.to_vec();
                                distinct.dedup();
                                if distinct.len() != 7 {
                                    continue;
                                }
                                let points = pts.map(|x| inc.point(x));
                                let fano = verify_fano(field, &points, |p| inc.contains(p), &special)
                                    .map_err(|e| Error::Invariant(format!("oracle candidate rejected: {e:?}")))?;
                                out.push(fano);
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    let before = out.len();
    out.dedup();
    if out.len() != before {
        return Err(Error::Invariant("oracle found a plane twice".into()));
    }
    Ok(out)
}

/// Planes containing `V = (0,0,1)` whose line through the special point
/// passes through V.
pub fn special_through_origin(field: &ExtField, planes: &[FanoConfig], special: &Point) -> Vec<FanoConfig> {
    let v = Point::origin();
    planes
        .iter()
        .filter(|f| f.flag() == FanoFlag::BmSpecial && f.points().contains(&v))
        .filter(|f| {
            f.lines()
                .iter()
                .any(|l: &Line| incident(field, special, l) && incident(field, &v, l))
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::ExtElem;
    use crate::unital::{OrthogonalBm, Unital};
    use std::sync::Arc;

    #[test]
    fn classical_q4_has_no_fano() {
        let f = Arc::new(ExtField::orthogonal(2).unwrap());
        let u = OrthogonalBm::classical(f.clone()).unwrap();
        let inc = UnitalIncidence::build(&f, &u.point_set());
        assert!(all_fanos(&f, &inc).unwrap().is_empty());
    }

    #[test]
    fn every_plane_has_at_most_one_special_line() {
        let f = Arc::new(ExtField::orthogonal(2).unwrap());
        let u = OrthogonalBm::new(f.clone(), ExtElem::ONE, f.delta()).unwrap();
        let inc = UnitalIncidence::build(&f, &u.point_set());
        let planes = all_fanos(&f, &inc).unwrap();
        assert!(!planes.is_empty());
        assert!(planes.iter().all(|p| p.special_line_count() <= 1));
    }
}

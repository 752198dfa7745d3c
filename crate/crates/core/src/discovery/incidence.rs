use std::collections::HashMap;

use rayon::prelude::*;

use crate::gf::ExtField;
use crate::plane::{join, Line, Point};
use crate::unital::UnitalPointSet;

/// Points of a unital together with its secant lines.
///
/// Points and secants are indexed in canonical sorted order. Every secant
/// carries exactly q+1 points.
#[derive(Clone, Debug)]
pub struct UnitalIncidence {
    points: Vec<Point>,
    index: HashMap<Point, u32>,
    special: u32,
    secants: Vec<Line>,
    secant_points: Vec<Vec<u32>>,
    through: Vec<Vec<u32>>,
    line_index: HashMap<Line, u32>,
}

impl UnitalIncidence {
    /// Builds the secants by grouping all joins. A line is recorded by the
    /// smallest point on it, which sees the other q points as later joins.
    pub fn build(field: &ExtField, set: &UnitalPointSet) -> Self {
        let points = set.points().to_vec();
        let n = points.len();
        let q = field.q() as usize;
        let index: HashMap<Point, u32> = points.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        let special = index[&set.special()];

        let mut owned: Vec<(Line, Vec<u32>)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let mut groups: HashMap<Line, Vec<u32>> = HashMap::new();
                for j in i + 1..n {
                    let l = join(field, &points[i], &points[j]).expect("distinct points");
                    groups.entry(l).or_default().push(j as u32);
                }
                groups
                    .into_iter()
                    .filter(|(_, rest)| rest.len() == q)
                    .map(move |(l, mut rest)| {
                        rest.insert(0, i as u32);
                        (l, rest)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        owned.sort_unstable_by_key(|a| a.0);

        let mut through = vec![Vec::new(); n];
        let mut secants = Vec::with_capacity(owned.len());
        let mut secant_points = Vec::with_capacity(owned.len());
        for (id, (l, pts)) in owned.into_iter().enumerate() {
            for &p in &pts {
                through[p as usize].push(id as u32);
            }
            secants.push(l);
            secant_points.push(pts);
        }
        let line_index = secants.iter().enumerate().map(|(i, l)| (*l, i as u32)).collect();
        UnitalIncidence {
            points,
            index,
            special,
            secants,
            secant_points,
            through,
            line_index,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: u32) -> Point {
        self.points[i as usize]
    }

    pub fn index_of(&self, p: &Point) -> Option<u32> {
        self.index.get(p).copied()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.index.contains_key(p)
    }

    pub fn special(&self) -> u32 {
        self.special
    }

    pub fn special_point(&self) -> Point {
        self.points[self.special as usize]
    }

    pub fn secants(&self) -> &[Line] {
        &self.secants
    }

    pub fn secant(&self, id: u32) -> Line {
        self.secants[id as usize]
    }

    /// Indices of the q+1 points on a secant, ascending.
    pub fn secant_points(&self, id: u32) -> &[u32] {
        &self.secant_points[id as usize]
    }

    /// Secants through a point, ascending.
    pub fn secants_through(&self, p: u32) -> &[u32] {
        &self.through[p as usize]
    }

    pub fn secant_id(&self, l: &Line) -> Option<u32> {
        self.line_index.get(l).copied()
    }

    pub fn secant_avoids_special(&self, id: u32) -> bool {
        self.secant_points(id).binary_search(&self.special).is_err()
    }

    /// Dense `n × n` table of the secant through each pair of points, with
    /// `u32::MAX` on the diagonal.
    pub fn pair_table(&self) -> Vec<u32> {
        let n = self.points.len();
        let mut t = vec![u32::MAX; n * n];
        for (id, pts) in self.secant_points.iter().enumerate() {
            for &a in pts {
                for &b in pts {
                    if a != b {
                        t[a as usize * n + b as usize] = id as u32;
                    }
                }
            }
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::ExtElem;
    use crate::plane::{all_lines, incident};
    use crate::unital::{OrthogonalBm, Unital};
    use std::sync::Arc;

    #[test]
    fn secant_counts_at_q4() {
        let f = Arc::new(ExtField::orthogonal(2).unwrap());
        let u = OrthogonalBm::new(f.clone(), ExtElem::ONE, f.delta()).unwrap();
        let set = u.point_set();
        let inc = UnitalIncidence::build(&f, &set);
        let (n, q) = (65, 4);
        assert_eq!(inc.points().len(), n);
        assert_eq!(inc.secants().len(), n * (n - 1) / (q * (q + 1)));
        for p in 0..n as u32 {
            assert_eq!(inc.secants_through(p).len(), q * q);
        }
        // cross-check against a scan of every line of the plane
        let oracle = all_lines(&f)
            .into_iter()
            .filter(|l| set.points().iter().filter(|p| incident(&f, p, l)).count() > 1)
            .count();
        assert_eq!(oracle, inc.secants().len());
        let vertical = (0..inc.secants().len() as u32)
            .filter(|&id| !inc.secant_avoids_special(id))
            .count();
        assert_eq!(vertical, q * q);
        let table = inc.pair_table();
        assert!(table
            .iter()
            .enumerate()
            .all(|(k, &id)| (k / n == k % n) == (id == u32::MAX)));
    }
}

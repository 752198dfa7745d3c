//! O'Nan configurations and embedded Fano planes.
//!
//! An O'Nan configuration is four lines in general position whose six
//! pairwise meets lie on the unital. In characteristic 2 the three diagonals
//! of any complete quadrilateral are concurrent; when their common point is
//! also on the unital the seven points form a Fano plane.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::ExtField;
use crate::plane::{incident, join, lines_json, meet, points_json, Line, Point};

/// Vertex `k` of an [`OnanConfig`] is the meet of lines `PAIRS[k]`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "kebab-case")]
pub enum OnanFailure {
    /// Fewer than four distinct lines.
    DuplicateLines,
    /// Three of the lines pass through a common point.
    Concurrent,
    /// A vertex is off the unital.
    NotOnUnital { index: usize },
}

/// A verified O'Nan configuration. Lines are stored sorted, so two
/// configurations are equal iff they have the same line set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OnanConfig {
    lines: [Line; 4],
    vertices: [Point; 6],
}

impl OnanConfig {
    pub fn lines(&self) -> &[Line; 4] {
        &self.lines
    }

    /// Vertices in [`PAIRS`] order.
    pub fn vertices(&self) -> &[Point; 6] {
        &self.vertices
    }

    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        serde_json::json!({
            "lines": lines_json(field, &self.lines),
            "vertices": points_json(field, &self.vertices),
        })
    }
}

/// Checks that four lines form a quadrilateral whose six vertices satisfy
/// `member`.
pub fn verify_onan(
    field: &ExtField,
    lines: [Line; 4],
    member: impl Fn(&Point) -> bool,
) -> std::result::Result<OnanConfig, OnanFailure> {
    let mut lines = lines;
    lines.sort();
    if lines.windows(2).any(|w| w[0] == w[1]) {
        return Err(OnanFailure::DuplicateLines);
    }
    let mut vertices = [Point::origin(); 6];
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        vertices[k] = meet(field, &lines[i], &lines[j]).expect("distinct lines meet");
    }
    let mut sorted = vertices;
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(OnanFailure::Concurrent);
    }
    if let Some(index) = vertices.iter().position(|v| !member(v)) {
        return Err(OnanFailure::NotOnUnital { index });
    }
    Ok(OnanConfig { lines, vertices })
}

/// The three diagonals of an O'Nan configuration and their common point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalCompletion {
    /// Opposite vertex pairs, each joined by one diagonal.
    pub opposite: [(Point, Point); 3],
    pub diagonals: [Line; 3],
    pub point: Point,
}

/// Pairs each vertex with the one vertex sharing none of the four lines,
/// joins the pairs and intersects the resulting diagonals.
///
/// Fails with [`Error::Invariant`] when the diagonals are not concurrent,
/// which cannot happen in characteristic 2.
pub fn diagonal_completion(field: &ExtField, onan: &OnanConfig) -> Result<DiagonalCompletion> {
    let shares_line = |p: &Point, q: &Point| {
        onan.lines
            .iter()
            .any(|l| incident(field, p, l) && incident(field, q, l))
    };
    let v = &onan.vertices;
    let mut opposite = Vec::with_capacity(3);
    let mut used = [false; 6];
    for i in 0..6 {
        if used[i] {
            continue;
        }
        let partners: Vec<usize> = (0..6).filter(|&j| j != i && !shares_line(&v[i], &v[j])).collect();
        let &[j] = partners.as_slice() else {
            return Err(Error::Invariant(format!(
                "vertex {i} has {} opposite vertices",
                partners.len()
            )));
        };
        used[i] = true;
        used[j] = true;
        opposite.push((v[i], v[j]));
    }
    let opposite: [(Point, Point); 3] = opposite
        .try_into()
        .map_err(|_| Error::Invariant("opposite pairing is not perfect".into()))?;
    let mut diagonals = [Line::at_infinity(); 3];
    for (k, (p, q)) in opposite.iter().enumerate() {
        diagonals[k] = join(field, p, q)?;
    }
    let point =
        meet(field, &diagonals[0], &diagonals[1]).map_err(|_| Error::Invariant("two diagonals coincide".into()))?;
    if !incident(field, &point, &diagonals[2]) {
        return Err(Error::Invariant(
            "diagonals of the quadrilateral are not concurrent".into(),
        ));
    }
    Ok(DiagonalCompletion {
        opposite,
        diagonals,
        point,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FanoFlag {
    /// Some line of the plane, as a line of PG(2,q^2), passes through the
    /// special point.
    BmSpecial,
    BmOrdinary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "kebab-case")]
pub enum FanoFailure {
    DuplicatePoints,
    ContainsSpecialPoint,
    NotOnUnital {
        index: usize,
    },
    /// The 21 joins do not collapse to 7 lines of 3 points each.
    Incidence {
        distinct_lines: usize,
    },
}

/// A verified Fano plane. Points and lines are stored sorted, so equality is
/// equality of point sets.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FanoConfig {
    points: [Point; 7],
    lines: [Line; 7],
    special_lines: u8,
}

impl FanoConfig {
    pub fn points(&self) -> &[Point; 7] {
        &self.points
    }

    pub fn lines(&self) -> &[Line; 7] {
        &self.lines
    }

    /// How many of the seven lines pass through the special point. At most
    /// one can, since two such lines would meet in the special point.
    pub fn special_line_count(&self) -> usize {
        self.special_lines as usize
    }

    pub fn flag(&self) -> FanoFlag {
        if self.special_lines > 0 {
            FanoFlag::BmSpecial
        } else {
            FanoFlag::BmOrdinary
        }
    }

    /// 7×7 point-line incidence matrix in stored order.
    pub fn incidence_matrix(&self, field: &ExtField) -> [[bool; 7]; 7] {
        let mut m = [[false; 7]; 7];
        for (i, p) in self.points.iter().enumerate() {
            for (j, l) in self.lines.iter().enumerate() {
                m[i][j] = incident(field, p, l);
            }
        }
        m
    }

    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        serde_json::json!({
            "flag": self.flag(),
            "special_lines": self.special_lines,
            "points": points_json(field, &self.points),
            "lines": lines_json(field, &self.lines),
        })
    }
}

/// Checks that seven points form a Fano plane on the unital not containing
/// `special`, and tags it BM-special or BM-ordinary.
pub fn verify_fano(
    field: &ExtField,
    points: &[Point; 7],
    member: impl Fn(&Point) -> bool,
    special: &Point,
) -> std::result::Result<FanoConfig, FanoFailure> {
    let mut pts = *points;
    pts.sort();
    if pts.windows(2).any(|w| w[0] == w[1]) {
        return Err(FanoFailure::DuplicatePoints);
    }
    if pts.contains(special) {
        return Err(FanoFailure::ContainsSpecialPoint);
    }
    if let Some(index) = points.iter().position(|p| !member(p)) {
        return Err(FanoFailure::NotOnUnital { index });
    }
    let mut pairs_per_line: HashMap<Line, u8> = HashMap::with_capacity(7);
    for i in 0..7 {
        for j in i + 1..7 {
            let l = join(field, &pts[i], &pts[j]).expect("distinct points");
            *pairs_per_line.entry(l).or_insert(0) += 1;
        }
    }
    if pairs_per_line.len() != 7 || pairs_per_line.values().any(|&c| c != 3) {
        return Err(FanoFailure::Incidence {
            distinct_lines: pairs_per_line.len(),
        });
    }
    let mut lines = [Line::at_infinity(); 7];
    for (slot, l) in lines.iter_mut().zip(pairs_per_line.keys()) {
        *slot = *l;
    }
    lines.sort();
    let special_lines = lines.iter().filter(|l| incident(field, special, l)).count() as u8;
    Ok(FanoConfig {
        points: pts,
        lines,
        special_lines,
    })
}

/// Completes an O'Nan configuration to a Fano plane through its diagonal
/// point, if that point is on the unital.
pub fn extend_onan_to_fano(
    field: &ExtField,
    onan: &OnanConfig,
    member: impl Fn(&Point) -> bool,
    special: &Point,
) -> Result<Option<FanoConfig>> {
    let completion = diagonal_completion(field, onan)?;
    if !member(&completion.point) {
        return Ok(None);
    }
    let v = onan.vertices();
    let pts = [v[0], v[1], v[2], v[3], v[4], v[5], completion.point];
    Ok(verify_fano(field, &pts, &member, special).ok())
}

/// One of the seven O'Nan configurations inside a Fano plane: the four lines
/// missing `omitted`.
#[derive(Clone, Debug)]
pub struct SubOnan {
    pub omitted: Point,
    pub onan: OnanConfig,
    /// None of the four lines passes through the special point.
    pub avoids_special: bool,
}

pub fn fano_onans(
    field: &ExtField,
    fano: &FanoConfig,
    member: impl Fn(&Point) -> bool,
    special: &Point,
) -> Result<Vec<SubOnan>> {
    fano.points
        .iter()
        .map(|p| {
            let rest: Vec<Line> = fano.lines.iter().filter(|l| !incident(field, p, l)).copied().collect();
            let lines: [Line; 4] = rest
                .try_into()
                .map_err(|v: Vec<Line>| Error::Invariant(format!("{} Fano lines miss a point, expected 4", v.len())))?;
            let onan = verify_onan(field, lines, &member)
                .map_err(|e| Error::Invariant(format!("sub-configuration failed: {e:?}")))?;
            let avoids_special = !lines.iter().any(|l| incident(field, special, l));
            Ok(SubOnan {
                omitted: *p,
                onan,
                avoids_special,
            })
        })
        .collect()
}

/// Lines of PG(2,2) as the translates of the difference set {0, 1, 3} mod 7.
pub const FANO_LINES: [[usize; 3]; 7] = [
    [0, 1, 3],
    [1, 2, 4],
    [2, 3, 5],
    [3, 4, 6],
    [4, 5, 0],
    [5, 6, 1],
    [6, 0, 2],
];

/// Finds a point relabelling that carries the incidence matrix onto the
/// standard PG(2,2), by backtracking over point bijections.
pub fn fano_isomorphism(matrix: &[[bool; 7]; 7]) -> Option<[usize; 7]> {
    let lines: Vec<Vec<usize>> = (0..7).map(|j| (0..7).filter(|&i| matrix[i][j]).collect()).collect();
    if lines.iter().any(|l| l.len() != 3) {
        return None;
    }
    let is_std_line = |a: usize, b: usize, c: usize| {
        let mut t = [a, b, c];
        t.sort();
        FANO_LINES.iter().any(|l| {
            let mut s = *l;
            s.sort();
            s == t
        })
    };
    fn search(
        k: usize,
        perm: &mut [usize; 7],
        used: &mut [bool; 7],
        lines: &[Vec<usize>],
        ok: &dyn Fn(usize, usize, usize) -> bool,
    ) -> bool {
        if k == 7 {
            return lines.iter().all(|l| ok(perm[l[0]], perm[l[1]], perm[l[2]]));
        }
        for target in 0..7 {
            if used[target] {
                continue;
            }
            perm[k] = target;
            used[target] = true;
            // prune on lines whose points are all assigned
            let consistent = lines
                .iter()
                .filter(|l| l.iter().all(|&i| i <= k))
                .all(|l| ok(perm[l[0]], perm[l[1]], perm[l[2]]));
            if consistent && search(k + 1, perm, used, lines, ok) {
                return true;
            }
            used[target] = false;
        }
        false
    }
    let mut perm = [0usize; 7];
    let mut used = [false; 7];
    search(0, &mut perm, &mut used, &lines, &is_std_line).then_some(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::ExtElem;
    use crate::unital::{OrthogonalBm, Unital};
    use std::sync::Arc;

    fn unital_q4() -> OrthogonalBm {
        let f = Arc::new(ExtField::orthogonal(2).unwrap());
        let d = f.delta();
        OrthogonalBm::new(f, ExtElem::ONE, d).unwrap()
    }

    #[test]
    fn concurrent_lines_rejected() {
        let u = unital_q4();
        let f = u.field();
        let o = Point::origin();
        let pts: Vec<Point> = f.nonzero().take(4).map(|x| Point::affine(x, ExtElem::ONE)).collect();
        let lines: Vec<Line> = pts.iter().map(|p| join(f, &o, p).unwrap()).collect();
        let lines: [Line; 4] = lines.try_into().unwrap();
        assert_eq!(verify_onan(f, lines, |_| true), Err(OnanFailure::Concurrent));
        let l = Line::at_infinity();
        assert_eq!(verify_onan(f, [l, l, l, l], |_| true), Err(OnanFailure::DuplicateLines));
    }

    #[test]
    fn standard_fano_is_isomorphic() {
        let mut m = [[false; 7]; 7];
        for (j, l) in FANO_LINES.iter().enumerate() {
            for &i in l {
                m[i][j] = true;
            }
        }
        assert!(fano_isomorphism(&m).is_some());
        // a 7x7 matrix with row/column sums 3 that is not PG(2,2): two lines
        // share two points.
        let mut bad = [[false; 7]; 7];
        let cols = [
            [0, 1, 2],
            [0, 1, 3],
            [2, 4, 5],
            [3, 4, 6],
            [5, 6, 0],
            [1, 4, 6],
            [2, 3, 5],
        ];
        for (j, c) in cols.iter().enumerate() {
            for &i in c {
                bad[i][j] = true;
            }
        }
        assert!(fano_isomorphism(&bad).is_none());
    }

    #[test]
    fn seven_points_with_four_collinear_fail() {
        let u = unital_q4();
        let f = u.field();
        // four points on X = 0 plus three more
        let base = f.base();
        let mut pts = Vec::new();
        for r in base.elements() {
            pts.push(Point::affine(ExtElem::ZERO, ExtElem::from_base(r)));
        }
        for x in f.nonzero().take(3) {
            pts.push(Point::affine(x, u.y_coordinate(x, base.generator())));
        }
        let pts: [Point; 7] = pts.try_into().unwrap();
        assert!(matches!(
            verify_fano(f, &pts, |p| u.contains(p), &Point::t_infinity()),
            Err(FanoFailure::Incidence { .. })
        ));
    }

    #[test]
    fn special_point_and_duplicates_rejected() {
        let u = unital_q4();
        let f = u.field();
        let mut pts = [Point::origin(); 7];
        assert_eq!(
            verify_fano(f, &pts, |p| u.contains(p), &Point::t_infinity()),
            Err(FanoFailure::DuplicatePoints)
        );
        for (i, x) in f.elements().take(6).enumerate() {
            pts[i] = Point::affine(x, u.y_coordinate(x, crate::gf::BaseElem::ZERO));
        }
        pts[6] = Point::t_infinity();
        assert_eq!(
            verify_fano(f, &pts, |p| u.contains(p), &Point::t_infinity()),
            Err(FanoFailure::ContainsSpecialPoint)
        );
    }
}

//! Points and lines of PG(2,q^2) in homogeneous coordinates.
//!
//! Both are stored in canonical form: scaled so the last nonzero coordinate
//! is 1. Equality, hashing and ordering therefore coincide with projective
//! equality. A point `(X, Y, Z)` lies on the line `[L, M, N]` iff
//! `LX + MY + NZ = 0`.

use crate::error::{Error, Result};
use crate::gf::{ExtElem, ExtField};

fn normalize(field: &ExtField, mut c: [ExtElem; 3]) -> Result<[ExtElem; 3]> {
    let pivot = c.iter().rposition(|x| !x.is_zero()).ok_or(Error::ZeroVector)?;
    if c[pivot] != ExtElem::ONE {
        let inv = field.inv(c[pivot])?;
        for x in &mut c[..pivot] {
            *x = field.mul(*x, inv);
        }
        c[pivot] = ExtElem::ONE;
    }
    Ok(c)
}

/// Cross product; in characteristic 2 the signs vanish.
#[inline]
fn cross(field: &ExtField, a: &[ExtElem; 3], b: &[ExtElem; 3]) -> [ExtElem; 3] {
    [
        field.mul(a[1], b[2]) + field.mul(a[2], b[1]),
        field.mul(a[2], b[0]) + field.mul(a[0], b[2]),
        field.mul(a[0], b[1]) + field.mul(a[1], b[0]),
    ]
}

fn coords_json(field: &ExtField, c: &[ExtElem; 3]) -> serde_json::Value {
    serde_json::json!({
        "hex": c.map(|x| field.hex(x)),
        "w": c.map(|x| field.power_notation(x)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point([ExtElem; 3]);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Line([ExtElem; 3]);

impl Point {
    pub fn new(field: &ExtField, coords: [ExtElem; 3]) -> Result<Self> {
        Ok(Point(normalize(field, coords)?))
    }

    /// The affine point `(x, y, 1)`, already canonical.
    pub const fn affine(x: ExtElem, y: ExtElem) -> Self {
        Point([x, y, ExtElem::ONE])
    }

    /// `(0, 1, 0)`, the special point of the unitals considered here.
    pub const fn t_infinity() -> Self {
        Point([ExtElem::ZERO, ExtElem::ONE, ExtElem::ZERO])
    }

    /// `(0, 0, 1)`.
    pub const fn origin() -> Self {
        Point::affine(ExtElem::ZERO, ExtElem::ZERO)
    }

    pub fn coords(&self) -> [ExtElem; 3] {
        self.0
    }

    pub fn x(&self) -> ExtElem {
        self.0[0]
    }

    pub fn y(&self) -> ExtElem {
        self.0[1]
    }

    pub fn z(&self) -> ExtElem {
        self.0[2]
    }

    pub fn is_affine(&self) -> bool {
        self.0[2] == ExtElem::ONE
    }

    /// Coordinatewise q-th power, `(X, Y, Z) -> (X^q, Y^q, Z^q)`. Canonical
    /// form is preserved because 1^q = 1 and 0^q = 0.
    pub fn frobenius(&self, field: &ExtField) -> Point {
        Point(self.0.map(|c| field.frobenius(c)))
    }

    pub fn to_hex(&self, field: &ExtField) -> [String; 3] {
        self.0.map(|c| field.hex(c))
    }

    /// `{"hex": [..3], "w": [..3]}`.
    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        coords_json(field, &self.0)
    }
}

impl Line {
    pub fn new(field: &ExtField, coeffs: [ExtElem; 3]) -> Result<Self> {
        Ok(Line(normalize(field, coeffs)?))
    }

    /// `[1, 0, 0]`: the line X = 0.
    pub const fn x_axis_zero() -> Self {
        Line([ExtElem::ONE, ExtElem::ZERO, ExtElem::ZERO])
    }

    /// `[0, 0, 1]`: the line at infinity Z = 0.
    pub const fn at_infinity() -> Self {
        Line([ExtElem::ZERO, ExtElem::ZERO, ExtElem::ONE])
    }

    pub fn coeffs(&self) -> [ExtElem; 3] {
        self.0
    }

    pub fn frobenius(&self, field: &ExtField) -> Line {
        Line(self.0.map(|c| field.frobenius(c)))
    }

    pub fn to_hex(&self, field: &ExtField) -> [String; 3] {
        self.0.map(|c| field.hex(c))
    }

    /// Same shape as a point's rendering.
    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        coords_json(field, &self.0)
    }
}

#[inline]
pub fn incident(field: &ExtField, p: &Point, l: &Line) -> bool {
    (field.mul(p.0[0], l.0[0]) + field.mul(p.0[1], l.0[1]) + field.mul(p.0[2], l.0[2])).is_zero()
}

/// The line through two distinct points.
pub fn join(field: &ExtField, p: &Point, q: &Point) -> Result<Line> {
    if p == q {
        return Err(Error::Degenerate("join of a point with itself"));
    }
    Line::new(field, cross(field, &p.0, &q.0))
}

/// The common point of two distinct lines.
pub fn meet(field: &ExtField, l: &Line, m: &Line) -> Result<Point> {
    if l == m {
        return Err(Error::Degenerate("meet of a line with itself"));
    }
    Point::new(field, cross(field, &l.0, &m.0))
}

/// True iff the coordinate determinant of the three points vanishes.
pub fn collinear(field: &ExtField, p: &Point, q: &Point, r: &Point) -> bool {
    let c = cross(field, &q.0, &r.0);
    (field.mul(p.0[0], c[0]) + field.mul(p.0[1], c[1]) + field.mul(p.0[2], c[2])).is_zero()
}

/// All q^4 + q^2 + 1 points, in canonical order within each chart.
pub fn all_points(field: &ExtField) -> Vec<Point> {
    let mut pts = Vec::new();
    for x in field.elements() {
        for y in field.elements() {
            pts.push(Point::affine(x, y));
        }
    }
    for x in field.elements() {
        pts.push(Point([x, ExtElem::ONE, ExtElem::ZERO]));
    }
    pts.push(Point([ExtElem::ONE, ExtElem::ZERO, ExtElem::ZERO]));
    pts
}

/// All q^4 + q^2 + 1 lines.
pub fn all_lines(field: &ExtField) -> Vec<Line> {
    all_points(field).into_iter().map(|p| Line(p.0)).collect()
}

/// Serializes a slice of points as a JSON array.
pub fn points_json(field: &ExtField, pts: &[Point]) -> serde_json::Value {
    serde_json::Value::Array(pts.iter().map(|p| p.to_json(field)).collect())
}

pub fn lines_json(field: &ExtField, lines: &[Line]) -> serde_json::Value {
    serde_json::Value::Array(lines.iter().map(|l| l.to_json(field)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::BaseElem;

    fn field() -> ExtField {
        ExtField::orthogonal(2).unwrap()
    }

    #[test]
    fn basic_incidences() {
        let f = field();
        assert!(incident(&f, &Point::t_infinity(), &Line::x_axis_zero()));
        for s in f.base().elements() {
            let p = Point::affine(ExtElem::ZERO, ExtElem::from_base(s));
            assert!(incident(&f, &p, &Line::x_axis_zero()));
        }
        let l = Line::new(&f, [f.delta(), ExtElem::ONE, ExtElem::ZERO]).unwrap();
        let p = Point::affine(ExtElem::ONE, f.delta());
        assert!(incident(&f, &p, &l));
    }

    #[test]
    fn join_and_meet_examples() {
        let f = field();
        assert_eq!(
            join(&f, &Point::origin(), &Point::t_infinity()).unwrap(),
            Line::x_axis_zero()
        );
        let s = Point::affine(ExtElem::ZERO, ExtElem::ONE);
        let t = Point::affine(ExtElem::ZERO, f.w_pow(1));
        assert_eq!(join(&f, &s, &t).unwrap(), Line::x_axis_zero());
        assert_eq!(
            meet(&f, &Line::x_axis_zero(), &Line::at_infinity()).unwrap(),
            Point::t_infinity()
        );
        assert!(matches!(join(&f, &s, &s), Err(Error::Degenerate(_))));
        assert!(matches!(
            meet(&f, &Line::at_infinity(), &Line::at_infinity()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn zero_vector_rejected() {
        let f = field();
        assert_eq!(Point::new(&f, [ExtElem::ZERO; 3]), Err(Error::ZeroVector));
    }

    #[test]
    fn collinear_examples() {
        let f = field();
        let p = Point::affine(ExtElem::ONE, ExtElem::ZERO);
        let q = Point::affine(ExtElem::ZERO, ExtElem::ONE);
        assert!(collinear(&f, &p, &p, &q));
        let s = Point::affine(ExtElem::ZERO, f.w_pow(1));
        assert!(collinear(&f, &Point::origin(), &Point::t_infinity(), &s));
        // det [[1,0,1],[0,1,1],[1,1,1]] = 1(1-1) - 0 + 1(0-1) = -1 = 1 in char 2
        let r = Point::affine(ExtElem::ONE, ExtElem::ONE);
        assert!(!collinear(&f, &p, &q, &r));
    }

    #[test]
    fn normalization_is_idempotent_and_projective() {
        let f = field();
        let g = f.generator();
        let raw = [g, ExtElem::ONE, f.delta()];
        let p = Point::new(&f, raw).unwrap();
        assert_eq!(Point::new(&f, p.coords()).unwrap(), p);
        for lambda in f.nonzero() {
            let scaled = raw.map(|c| f.mul(c, lambda));
            assert_eq!(Point::new(&f, scaled).unwrap(), p);
        }
        assert_eq!(p.z(), ExtElem::ONE);
    }

    #[test]
    fn plane_counts_at_q4() {
        // PG(2,16): every point on 17 lines, every line through 17 points.
        let f = ExtField::orthogonal(2).unwrap();
        let pts = all_points(&f);
        let lines = all_lines(&f);
        assert_eq!(pts.len(), 273);
        assert_eq!(lines.len(), 273);
        for l in &lines {
            assert_eq!(pts.iter().filter(|p| incident(&f, p, l)).count(), 17);
        }
        for p in &pts {
            assert_eq!(lines.iter().filter(|l| incident(&f, p, l)).count(), 17);
        }
    }

    #[test]
    fn frobenius_of_point_stays_canonical() {
        let f = field();
        let p = Point::new(&f, [f.delta(), ExtElem::ONE, ExtElem::ZERO]).unwrap();
        let pq = p.frobenius(&f);
        assert_eq!(Point::new(&f, pq.coords()).unwrap(), pq);
        assert_eq!(pq.x(), f.delta() + ExtElem::from_base(BaseElem::ONE));
    }
}

//! Worked Tits-unital examples at q = 8 and q = 32.
//!
//! Each example lists seven points `V, R1, R2, P, P1, P2, M` as base-field
//! exponents of `w` (`None` for zero), with the default primitive moduli
//! `w^3 = w + 1` and `w^5 = w^2 + 1`.

use crate::config::{diagonal_completion, verify_fano, verify_onan, FanoConfig, FanoFailure};
use crate::error::{Error, Result};
use crate::gf::{BaseElem, ExtElem, ExtField};
use crate::plane::{join, Line, Point};
use crate::unital::{TitsUnital, Unital};

pub const POINT_NAMES: [&str; 7] = ["V", "R1", "R2", "P", "P1", "P2", "M"];

/// `(x0, x1, y0, y1)` exponents of w for one point `(x0 + x1·δ, y0 + y1·δ, 1)`.
type Coords = [Option<i64>; 4];

const Q8: [Coords; 7] = [
    [None, None, None, None],
    [None, None, Some(2), None],
    [None, None, Some(5), None],
    [Some(0), None, Some(1), Some(0)],
    [Some(5), Some(6), Some(6), Some(0)],
    [Some(3), Some(6), Some(4), Some(0)],
    [Some(3), Some(5), Some(0), Some(0)],
];

const Q32: [Coords; 7] = [
    [None, None, None, None],
    [None, None, Some(4), None],
    [None, None, Some(5), None],
    [Some(0), None, Some(26), Some(0)],
    [Some(11), Some(24), Some(16), Some(29)],
    [Some(15), Some(8), Some(20), Some(13)],
    [Some(15), Some(0), Some(4), Some(29)],
];

/// One evaluation `f(w^i, w^j)` with its expected value.
#[derive(Clone, Debug)]
pub struct FCheck {
    pub label: &'static str,
    pub value: BaseElem,
    pub expected: BaseElem,
}

/// Replacing one listed point by the diagonal point of the other six.
#[derive(Clone, Debug)]
pub struct Repair {
    pub replaced: &'static str,
    pub point: Point,
    pub on_unital: bool,
    pub completes_fano: bool,
}

#[derive(Clone, Debug)]
pub struct TitsExample {
    pub unital: TitsUnital,
    pub points: [Point; 7],
    pub membership: [bool; 7],
    pub f_checks: Vec<FCheck>,
    pub fano: std::result::Result<FanoConfig, FanoFailure>,
    /// Only computed when the listed points do not form a Fano plane.
    pub repairs: Vec<Repair>,
}

impl TitsExample {
    pub fn all_members(&self) -> bool {
        self.membership.iter().all(|&m| m)
    }

    pub fn f_checks_pass(&self) -> bool {
        self.f_checks.iter().all(|c| c.value == c.expected)
    }

    pub fn passed(&self) -> bool {
        self.all_members() && self.f_checks_pass() && self.fano.is_ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = self.unital.field();
        let base = f.base();
        serde_json::json!({
            "q": f.q(),
            "tau_exponent": self.unital.tau_exponent(),
            "points": POINT_NAMES.iter().zip(&self.points).zip(&self.membership).map(|((n, p), m)| {
                serde_json::json!({ "name": n, "point": p.to_json(f), "on_unital": m })
            }).collect::<Vec<_>>(),
            "f_checks": self.f_checks.iter().map(|c| serde_json::json!({
                "label": c.label,
                "value": crate::gf::base_json(base, c.value),
                "expected": crate::gf::base_json(base, c.expected),
            })).collect::<Vec<_>>(),
            "fano": match &self.fano {
                Ok(cfg) => cfg.to_json(f),
                Err(e) => serde_json::to_value(e).expect("serializable"),
            },
            "repairs": self.repairs.iter().map(|r| serde_json::json!({
                "replaced": r.replaced,
                "point": r.point.to_json(f),
                "on_unital": r.on_unital,
                "completes_fano": r.completes_fano,
            })).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }
}

fn decode(field: &ExtField, c: &Coords) -> Point {
    let base = field.base();
    let e = |i: Option<i64>| i.map_or(BaseElem::ZERO, |i| base.w_pow(i));
    Point::affine(ExtElem::new(e(c[0]), e(c[1])), ExtElem::new(e(c[2]), e(c[3])))
}

/// Six points whose joins give exactly four lines of three points, i.e. the
/// vertices of a quadrilateral.
fn quadrilateral_lines(field: &ExtField, pts: &[Point]) -> Option<[Line; 4]> {
    let mut lines: Vec<(Line, usize)> = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let l = join(field, &pts[i], &pts[j]).ok()?;
            match lines.iter_mut().find(|(m, _)| *m == l) {
                Some(e) => e.1 += 1,
                None => lines.push((l, 1)),
            }
        }
    }
    let full: Vec<Line> = lines.iter().filter(|e| e.1 == 3).map(|e| e.0).collect();
    full.try_into().ok()
}

fn repairs(unital: &TitsUnital, points: &[Point; 7]) -> Vec<Repair> {
    let f = unital.field();
    let special = unital.special_point();
    let mut out = Vec::new();
    for (i, name) in POINT_NAMES.iter().enumerate() {
        let rest: Vec<Point> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| *p)
            .collect();
        let Some(lines) = quadrilateral_lines(f, &rest) else {
            continue;
        };
        let Ok(onan) = verify_onan(f, lines, |_| true) else {
            continue;
        };
        let Ok(d) = diagonal_completion(f, &onan) else { continue };
        let mut seven = *points;
        seven[i] = d.point;
        out.push(Repair {
            replaced: name,
            point: d.point,
            on_unital: unital.contains(&d.point),
            completes_fano: verify_fano(f, &seven, |p| unital.contains(p), &special).is_ok(),
        });
    }
    out
}

/// The listed example for `q ∈ {8, 32}`, checked as given.
pub fn tits_example(q: u32) -> Result<TitsExample> {
    let (m, table) = match q {
        8 => (3, &Q8),
        32 => (5, &Q32),
        _ => return Err(Error::UnsupportedOrder(q)),
    };
    let unital = TitsUnital::with_degree(m)?;
    let f = unital.field();
    let base = f.base();
    let points = table.map(|c| decode(f, &c));
    let membership = points.map(|p| unital.contains(&p));
    let f_checks = if q == 8 {
        let w = |i| base.w_pow(i);
        vec![
            FCheck {
                label: "f(w^5, w^6)",
                value: unital.f(w(5), w(6)),
                expected: BaseElem::ONE,
            },
            FCheck {
                label: "f(w^3, w^5)",
                value: unital.f(w(3), w(5)),
                expected: BaseElem::ONE,
            },
        ]
    } else {
        Vec::new()
    };
    let fano = verify_fano(f, &points, |p| unital.contains(p), &unital.special_point());
    let repairs = if fano.is_err() {
        repairs(&unital, &points)
    } else {
        Vec::new()
    };
    Ok(TitsExample {
        unital,
        points,
        membership,
        f_checks,
        fano,
        repairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q8_example_is_a_fano_plane() {
        let ex = tits_example(8).unwrap();
        assert!(ex.all_members());
        assert!(ex.f_checks_pass());
        assert!(ex.fano.is_ok());
        assert!(ex.repairs.is_empty());
    }

    #[test]
    fn q32_example_points_are_members() {
        let ex = tits_example(32).unwrap();
        assert_eq!(ex.unital.field().base().modulus(), 0x25);
        assert!(ex.all_members());
    }

    #[test]
    fn unsupported_example() {
        assert!(matches!(tits_example(128), Err(Error::UnsupportedOrder(128))));
    }
}

use std::sync::Arc;

use crate::config::{diagonal_completion, verify_fano, verify_onan, FanoConfig, FanoFlag, OnanConfig};
use crate::error::{Error, Result};
use crate::gf::{BaseElem, ExtElem, ExtField};
use crate::plane::{join, meet, Line, Point};
use crate::unital::{OrthogonalBm, Unital};

/// A unital `U(a, δ)` with `a ∈ GF(q)*`, the form the Feng-Li construction
/// starts from.
#[derive(Clone, Debug)]
pub struct FengLiInput {
    spec: OrthogonalBm,
}

impl FengLiInput {
    pub fn new(spec: OrthogonalBm) -> Result<Self> {
        let f = spec.field();
        if spec.is_classical() || !spec.a().in_base() {
            return Err(Error::InvalidSpec("Feng-Li input needs a in GF(q)*".into()));
        }
        if spec.b() != f.delta() {
            return Err(Error::InvalidSpec("Feng-Li input needs b = δ".into()));
        }
        Ok(FengLiInput { spec })
    }

    /// `U(a0, δ)` for `a0 ∈ GF(q)*`.
    pub fn with_a(field: Arc<ExtField>, a0: BaseElem) -> Result<Self> {
        let delta = field.delta();
        Self::new(OrthogonalBm::new(field, ExtElem::from_base(a0), delta)?)
    }

    pub fn spec(&self) -> &OrthogonalBm {
        &self.spec
    }
}

/// The four lines `QR^φ, RQ^φ, QQ^φ, RR^φ` with `φ` the coordinatewise
/// q-th power. Q and R^φ lie on `[δ,1,0]`, so `QR^φ = [δ,1,0]` and
/// `RQ^φ = [δ+1,1,0]` meet in `P = (0,0,1)`.
#[derive(Clone, Debug)]
pub struct FengLiConstruction {
    pub p: Point,
    pub q: Point,
    pub r: Point,
    pub q_phi: Point,
    pub r_phi: Point,
    /// `QQ^φ ∩ RR^φ`, on the line `X = 0`.
    pub m: Point,
    pub onan: OnanConfig,
}

#[derive(Clone, Debug)]
pub struct FengLiFano {
    pub construction: FengLiConstruction,
    /// `QR ∩ Q^φR^φ`, a point `(0, s, 1)` with `s ∈ GF(q)`.
    pub n: Point,
    pub fano: FanoConfig,
}

fn phi(field: &ExtField, p: &Point) -> Point {
    p.frobenius(field)
}

/// Unital points on `[δ,1,0]` other than `(0,0,1)`, ascending.
fn axis_points(input: &FengLiInput) -> Vec<Point> {
    let u = &input.spec;
    let f = u.field();
    let delta = f.delta();
    let mut pts: Vec<Point> = f
        .nonzero()
        .map(|x| Point::affine(x, f.mul(delta, x)))
        .filter(|p| u.contains(p))
        .collect();
    pts.sort();
    pts
}

fn try_pair(input: &FengLiInput, q: Point, s: Point) -> Option<FengLiConstruction> {
    let u = &input.spec;
    let f = u.field();
    let r = phi(f, &s);
    let (q_phi, r_phi) = (phi(f, &q), s);
    let lines: [Line; 4] = [
        join(f, &q, &r_phi).ok()?,
        join(f, &r, &q_phi).ok()?,
        join(f, &q, &q_phi).ok()?,
        join(f, &r, &r_phi).ok()?,
    ];
    let onan = verify_onan(f, lines, |p| u.contains(p)).ok()?;
    let p = Point::origin();
    let m = meet(f, &lines[2], &lines[3]).ok()?;
    let on_axis = m.is_affine() && m.x().is_zero();
    (onan.vertices().contains(&p) && on_axis).then_some(FengLiConstruction {
        p,
        q,
        r,
        q_phi,
        r_phi,
        m,
        onan,
    })
}

/// The Feng-Li O'Nan configuration, taking the lexicographically smallest
/// ordered pair `(Q, R^φ)` of points on `[δ,1,0] ∩ U` that works.
pub fn fengli_onan(input: &FengLiInput) -> Result<FengLiConstruction> {
    let pts = axis_points(input);
    for &q in &pts {
        for &s in &pts {
            if q == s {
                continue;
            }
            if let Some(c) = try_pair(input, q, s) {
                return Ok(c);
            }
        }
    }
    Err(Error::Construction(format!(
        "no Feng-Li pair among {} points of [δ,1,0]",
        pts.len()
    )))
}

/// Completes the Feng-Li configuration with `N = QR ∩ Q^φR^φ`. Any failure
/// here is reported as [`Error::Invariant`].
pub fn fengli_fano(input: &FengLiInput) -> Result<FengLiFano> {
    let u = &input.spec;
    let f = u.field();
    let c = fengli_onan(input)?;
    let n = meet(f, &join(f, &c.q, &c.r)?, &join(f, &c.q_phi, &c.r_phi)?)?;
    let completion = diagonal_completion(f, &c.onan)?;
    if completion.point != n {
        return Err(Error::Invariant("QR ∩ Q^φR^φ differs from the diagonal point".into()));
    }
    if !(n.is_affine() && n.x().is_zero() && n.y().in_base()) {
        return Err(Error::Invariant("N is not of the form (0, s, 1)".into()));
    }
    let pts = [c.p, c.q, c.r, c.q_phi, c.r_phi, c.m, n];
    let special = u.special_point();
    let fano = verify_fano(f, &pts, |p| u.contains(p), &special)
        .map_err(|e| Error::Invariant(format!("Feng-Li completion is not a Fano plane: {e:?}")))?;
    if fano.flag() != FanoFlag::BmSpecial {
        return Err(Error::Invariant("Feng-Li completion has no line through T∞".into()));
    }
    Ok(FengLiFano {
        construction: c,
        n,
        fano,
    })
}

impl FengLiConstruction {
    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        serde_json::json!({
            "P": self.p.to_json(field),
            "Q": self.q.to_json(field),
            "R": self.r.to_json(field),
            "Q_phi": self.q_phi.to_json(field),
            "R_phi": self.r_phi.to_json(field),
            "M": self.m.to_json(field),
            "onan": self.onan.to_json(field),
        })
    }
}

impl FengLiFano {
    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        serde_json::json!({
            "construction": self.construction.to_json(field),
            "N": self.n.to_json(field),
            "fano": self.fano.to_json(field),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::fano_onans;
    use crate::plane::incident;

    #[test]
    fn q4_pair_matches_scan_of_axis() {
        let f = Arc::new(ExtField::orthogonal(2).unwrap());
        let input = FengLiInput::with_a(f.clone(), BaseElem::ONE).unwrap();
        let pts = axis_points(&input);
        // independent scan of every point of PG(2,16) on [δ,1,0]
        let axis = Line::new(&f, [f.delta(), ExtElem::ONE, ExtElem::ZERO]).unwrap();
        let mut oracle: Vec<Point> = crate::plane::all_points(&f)
            .into_iter()
            .filter(|p| incident(&f, p, &axis) && input.spec().contains(p) && *p != Point::origin())
            .collect();
        oracle.sort();
        assert_eq!(pts, oracle);
        assert_eq!(pts.len(), 4);

        let c = fengli_onan(&input).unwrap();
        assert!(c.onan.vertices().contains(&Point::origin()));
        assert!(c.onan.vertices().contains(&c.m));
        for p in [c.q, c.r, c.q_phi, c.r_phi] {
            assert!(input.spec().contains(&p));
        }
        // first working pair in lexicographic order
        let first = pts
            .iter()
            .flat_map(|&a| pts.iter().map(move |&b| (a, b)))
            .find(|&(a, b)| a != b && try_pair(&input, a, b).is_some())
            .unwrap();
        assert_eq!((c.q, c.r_phi), first);
    }

    #[test]
    fn completes_to_special_fano_for_every_a() {
        for m in [2, 3, 4] {
            let f = Arc::new(ExtField::orthogonal(m).unwrap());
            for a0 in f.base().trace_set(0).into_iter().filter(|a| !a.is_zero()) {
                let input = FengLiInput::with_a(f.clone(), a0).unwrap();
                let out = fengli_fano(&input).unwrap();
                assert_eq!(out.fano.flag(), FanoFlag::BmSpecial);
                assert!(out.fano.points().contains(&out.n));
                let subs = fano_onans(&f, &out.fano, |p| input.spec().contains(p), &Point::t_infinity()).unwrap();
                assert!(subs.iter().any(|s| s.avoids_special));
            }
        }
    }

    #[test]
    fn rejects_non_fengli_forms() {
        let f = Arc::new(ExtField::orthogonal(2).unwrap());
        let classical = OrthogonalBm::classical(f.clone()).unwrap();
        assert!(FengLiInput::new(classical).is_err());
        let b = f.delta() + ExtElem::ONE;
        let shifted = OrthogonalBm::new(f.clone(), ExtElem::ONE, b).unwrap();
        assert!(FengLiInput::new(shifted).is_err());
    }
}

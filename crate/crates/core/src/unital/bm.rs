use std::sync::Arc;

use super::{Unital, UnitalPointSet};
use crate::error::{Error, Result};
use crate::gf::{BaseElem, BaseField, ExtElem, ExtField, Tower};
use crate::plane::Point;

/// `d = a^(q+1) / (b^q + b)^2`, an element of GF(q).
pub fn discriminant(field: &ExtField, a: ExtElem, b: ExtElem) -> Result<BaseElem> {
    let bb = field.boxed(b);
    if bb.is_zero() {
        return Err(Error::InvalidSpec("b lies in GF(q), so b^q + b = 0".into()));
    }
    let f = field.base();
    f.div(field.norm(a), f.square(bb))
}

/// `m'·q^3·(q-1)`, where `m'` is the dimension of GF(q^2) over the smallest
/// subfield of GF(q) containing `d`.
pub fn group_order_for_discriminant(base: &BaseField, d: BaseElem) -> u64 {
    let e = base.smallest_subfield_degree(d);
    let dim = u64::from(2 * base.degree() / e);
    let q = u64::from(base.order());
    dim * q * q * q * (q - 1)
}

/// The orthogonal Buekenhout-Metz unital
/// `U(a,b) = {(x, a x^2 + b x^(q+1) + r, 1) : x ∈ GF(q^2), r ∈ GF(q)} ∪ {(0,1,0)}`.
#[derive(Clone, Debug)]
pub struct OrthogonalBm {
    field: Arc<ExtField>,
    a: ExtElem,
    b: ExtElem,
    d: BaseElem,
}

impl OrthogonalBm {
    /// Validates `b ∉ GF(q)` and that the discriminant has absolute trace 0.
    pub fn new(field: Arc<ExtField>, a: ExtElem, b: ExtElem) -> Result<Self> {
        if field.tower() != Tower::Orthogonal {
            return Err(Error::InvalidSpec(
                "orthogonal unitals need the orthogonal tower".into(),
            ));
        }
        let d = discriminant(&field, a, b)?;
        if field.base().abs_trace(d) != 0 {
            return Err(Error::InvalidSpec(format!(
                "discriminant {} has absolute trace 1",
                field.base().power_notation(d)
            )));
        }
        Ok(OrthogonalBm { field, a, b, d })
    }

    /// The classical (Hermitian) unital U(0, δ).
    pub fn classical(field: Arc<ExtField>) -> Result<Self> {
        let delta = field.delta();
        Self::new(field, ExtElem::ZERO, delta)
    }

    pub fn a(&self) -> ExtElem {
        self.a
    }

    pub fn b(&self) -> ExtElem {
        self.b
    }

    pub fn discriminant(&self) -> BaseElem {
        self.d
    }

    pub fn is_classical(&self) -> bool {
        self.a.is_zero()
    }

    pub fn field_arc(&self) -> &Arc<ExtField> {
        &self.field
    }

    /// `a x^2 + b x^(q+1) + r`.
    pub fn y_coordinate(&self, x: ExtElem, r: BaseElem) -> ExtElem {
        let f = &*self.field;
        f.mul(self.a, f.square(x)) + f.scale(self.b, f.norm(x)) + ExtElem::from_base(r)
    }

    /// Membership test for an affine point, written with the relative trace:
    /// `box(a x^2) + box(b)·x^(q+1) + box(y) = 0`.
    #[inline]
    pub fn contains_affine(&self, x: ExtElem, y: ExtElem) -> bool {
        let f = &*self.field;
        let lhs = f.boxed(f.mul(self.a, f.square(x))) + f.base().mul(f.boxed(self.b), f.norm(x)) + f.boxed(y);
        lhs.is_zero()
    }

    /// Order of the stabiliser of U(a,b) in PΓL(3,q^2).
    pub fn group_order(&self) -> Result<u64> {
        if self.is_classical() {
            return Err(Error::InvalidSpec(
                "group order formula applies to non-classical unitals".into(),
            ));
        }
        Ok(group_order_for_discriminant(self.field.base(), self.d))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let f = &*self.field;
        serde_json::json!({
            "family": "bm",
            "a": crate::gf::ext_json(f, self.a),
            "b": crate::gf::ext_json(f, self.b),
            "discriminant": crate::gf::base_json(f.base(), self.d),
            "classical": self.is_classical(),
        })
    }
}

impl Unital for OrthogonalBm {
    fn field(&self) -> &ExtField {
        &self.field
    }

    fn contains(&self, p: &Point) -> bool {
        if p.is_affine() {
            self.contains_affine(p.x(), p.y())
        } else {
            *p == Point::t_infinity()
        }
    }

    fn point_set(&self) -> UnitalPointSet {
        let f = &*self.field;
        let mut pts = Vec::with_capacity((f.q() as usize).pow(3) + 1);
        for x in f.elements() {
            for r in f.base().elements() {
                pts.push(Point::affine(x, self.y_coordinate(x, r)));
            }
        }
        pts.push(Point::t_infinity());
        UnitalPointSet::new(pts, Point::t_infinity())
    }
}

/// Parameters of a map `(a, b) -> (a^τ γ^2 ν, b^τ γ^(q+1) ν + u)` between
/// equivalent orthogonal BM unitals. `tau` is the exponent `i` of
/// `τ: x -> x^(2^i)`, applied on GF(q^2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub tau: u32,
    pub gamma: ExtElem,
    pub nu: BaseElem,
    pub u: BaseElem,
}

impl EquivalenceWitness {
    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        serde_json::json!({
            "tau": self.tau,
            "gamma": crate::gf::ext_json(field, self.gamma),
            "nu": crate::gf::base_json(field.base(), self.nu),
            "u": crate::gf::base_json(field.base(), self.u),
        })
    }
}

pub fn apply_equivalence(field: &ExtField, a: ExtElem, b: ExtElem, w: &EquivalenceWitness) -> (ExtElem, ExtElem) {
    let a_t = field.frobenius_pow(a, w.tau);
    let b_t = field.frobenius_pow(b, w.tau);
    let a2 = field.scale(field.mul(a_t, field.square(w.gamma)), w.nu);
    let scale = field.base().mul(field.norm(w.gamma), w.nu);
    let b2 = field.scale(b_t, scale) + ExtElem::from_base(w.u);
    (a2, b2)
}

/// Exhaustive search for a witness mapping `s1` to `s2`.
pub fn are_equivalent(s1: &OrthogonalBm, s2: &OrthogonalBm) -> Option<EquivalenceWitness> {
    let f = &*s1.field;
    if f != &*s2.field {
        return None;
    }
    let base = f.base();
    let (a2, b2) = (s2.a, s2.b);
    for tau in 0..base.degree() {
        let a_t = f.frobenius_pow(s1.a, tau);
        let b_t = f.frobenius_pow(s1.b, tau);
        for gamma in f.nonzero() {
            let t = f.mul(a_t, f.square(gamma));
            let nus: Vec<BaseElem> = if t.is_zero() {
                if !a2.is_zero() {
                    continue;
                }
                base.nonzero().collect()
            } else {
                match f.div(a2, t) {
                    Ok(nu) if nu.in_base() && !nu.is_zero() => vec![nu.c0],
                    _ => continue,
                }
            };
            let n = f.norm(gamma);
            for nu in nus {
                let u = b2 + f.scale(b_t, base.mul(n, nu));
                if u.in_base() {
                    return Some(EquivalenceWitness {
                        tau,
                        gamma,
                        nu,
                        u: u.c0,
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(m: u32) -> Arc<ExtField> {
        Arc::new(ExtField::orthogonal(m).unwrap())
    }

    #[test]
    fn discriminant_examples() {
        let f = field(3);
        assert_eq!(discriminant(&f, ExtElem::ZERO, f.delta()).unwrap(), BaseElem::ZERO);
        assert_eq!(discriminant(&f, ExtElem::ONE, f.delta()).unwrap(), BaseElem::ONE);
        assert!(matches!(
            discriminant(&f, ExtElem::ONE, ExtElem::ONE),
            Err(Error::InvalidSpec(_))
        ));
        for a in f.base().nonzero() {
            let d = discriminant(&f, ExtElem::from_base(a), f.delta()).unwrap();
            assert_eq!(d, f.base().square(a));
        }
    }

    #[test]
    fn u_one_delta_valid_only_for_even_m() {
        for m in 2..=6 {
            let f = field(m);
            let ok = OrthogonalBm::new(f.clone(), ExtElem::ONE, f.delta()).is_ok();
            assert_eq!(ok, m % 2 == 0, "m = {m}");
        }
    }

    #[test]
    fn membership_examples() {
        let f = field(2);
        let u = OrthogonalBm::new(f.clone(), ExtElem::ONE, f.delta()).unwrap();
        assert!(u.contains(&Point::t_infinity()));
        for r in f.base().elements() {
            assert!(u.contains(&Point::affine(ExtElem::ZERO, ExtElem::from_base(r))));
        }
        for x in f.elements() {
            for r in f.base().elements() {
                assert!(u.contains(&Point::affine(x, u.y_coordinate(x, r))));
            }
        }
        // (1, 0, 0) is at infinity but is not the special point
        let p = Point::new(&f, [ExtElem::ONE, ExtElem::ZERO, ExtElem::ZERO]).unwrap();
        assert!(!u.contains(&p));
    }

    #[test]
    fn point_counts() {
        for m in [2, 3] {
            let f = field(m);
            let a = ExtElem::from_base(f.base().trace_set(0)[1]);
            let u = OrthogonalBm::new(f.clone(), a, f.delta()).unwrap();
            let q = f.q() as usize;
            assert_eq!(u.point_set().len(), q * q * q + 1);
        }
    }

    #[test]
    fn group_order_examples() {
        let f = field(2);
        let u = OrthogonalBm::new(f.clone(), ExtElem::ONE, f.delta()).unwrap();
        // d = 1 lives in GF(2): dimension of GF(16) over GF(2) is 4.
        assert_eq!(u.group_order().unwrap(), 4 * 64 * 3);
        // d in GF(4) \ GF(2) at q = 4 gives dimension 2.
        assert_eq!(group_order_for_discriminant(f.base(), f.base().generator()), 384);
        assert!(OrthogonalBm::classical(f).unwrap().group_order().is_err());
    }

    #[test]
    fn equivalence_examples() {
        let f = field(3);
        let base = f.base();
        let a = ExtElem::from_base(base.trace_set(0)[1]);
        let s = OrthogonalBm::new(f.clone(), a, f.delta()).unwrap();
        let w = are_equivalent(&s, &s).unwrap();
        assert_eq!(apply_equivalence(&f, s.a(), s.b(), &w), (s.a(), s.b()));

        // Normalising a to 1 with γ = 1/√a.
        let sqrt_a = f.sqrt(a);
        let b1 = f.div(f.delta(), f.pow(sqrt_a, u64::from(f.q()) + 1)).unwrap();
        let t = OrthogonalBm::new(f.clone(), ExtElem::ONE, b1).unwrap();
        let w = EquivalenceWitness {
            tau: 0,
            gamma: f.inv(sqrt_a).unwrap(),
            nu: BaseElem::ONE,
            u: BaseElem::ZERO,
        };
        assert_eq!(apply_equivalence(&f, s.a(), s.b(), &w), (t.a(), t.b()));
        assert!(are_equivalent(&s, &t).is_some());

        // Translating b by GF(q).
        let shifted = OrthogonalBm::new(f.clone(), a, f.delta() + f.w_pow(3)).unwrap();
        let w = are_equivalent(&s, &shifted).unwrap();
        assert_eq!(apply_equivalence(&f, s.a(), s.b(), &w), (shifted.a(), shifted.b()));

        let classical = OrthogonalBm::classical(f.clone()).unwrap();
        assert!(are_equivalent(&s, &classical).is_none());
        assert!(are_equivalent(&classical, &s).is_none());
    }
}

use std::sync::Arc;

use super::{Unital, UnitalPointSet};
use crate::error::{Error, Result};
use crate::gf::{BaseElem, ExtElem, ExtField, Tower};
use crate::plane::Point;

/// The Buekenhout-Tits unital in PG(2,q^2), q = 2^(2h+1).
///
/// Finite points are `(x0 + x1·δ, r + f(x0, x1)·δ, 1)` with
/// `f(x, y) = x^(τ+2) + x·y + y^τ` and `τ: x -> x^(2^(h+1))`, so that
/// `x^(τ^2) = x^2` on GF(q). δ satisfies δ^2 = δ + 1.
#[derive(Clone, Debug)]
pub struct TitsUnital {
    field: Arc<ExtField>,
    tau_exp: u64,
}

impl TitsUnital {
    pub fn new(field: Arc<ExtField>) -> Result<Self> {
        if field.tower() != Tower::Tits {
            return Err(Error::InvalidSpec("Tits unital needs the Tits tower (v = 1)".into()));
        }
        let m = field.base().degree();
        if m.is_multiple_of(2) || m < 3 {
            return Err(Error::UnsupportedOrder(field.q()));
        }
        let h = (m - 1) / 2;
        Ok(TitsUnital {
            field,
            tau_exp: 1 << (h + 1),
        })
    }

    /// Tits unital over GF(2^m) with the default modulus.
    pub fn with_degree(m: u32) -> Result<Self> {
        let field = ExtField::tits(m).map_err(|_| Error::UnsupportedOrder(1 << m.min(31)))?;
        Self::new(Arc::new(field))
    }

    pub fn field_arc(&self) -> &Arc<ExtField> {
        &self.field
    }

    /// The exponent `2^(h+1)` of τ.
    pub fn tau_exponent(&self) -> u64 {
        self.tau_exp
    }

    pub fn tau(&self, x: BaseElem) -> BaseElem {
        self.field.base().pow(x, self.tau_exp)
    }

    /// `f(x, y) = x^(τ+2) + x·y + y^τ`.
    pub fn f(&self, x: BaseElem, y: BaseElem) -> BaseElem {
        let base = self.field.base();
        base.pow(x, self.tau_exp + 2) + base.mul(x, y) + base.pow(y, self.tau_exp)
    }

    /// The finite point `P(x, r)` with `x = x0 + x1·δ`.
    pub fn point(&self, x0: BaseElem, x1: BaseElem, r: BaseElem) -> Point {
        Point::affine(ExtElem::new(x0, x1), ExtElem::new(r, self.f(x0, x1)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "family": "tits", "tau_exponent": self.tau_exp })
    }
}

impl Unital for TitsUnital {
    fn field(&self) -> &ExtField {
        &self.field
    }

    fn contains(&self, p: &Point) -> bool {
        if !p.is_affine() {
            return *p == Point::t_infinity();
        }
        let x = p.x();
        p.y().c1 == self.f(x.c0, x.c1)
    }

    fn point_set(&self) -> UnitalPointSet {
        let base = self.field.base();
        let mut pts = Vec::new();
        for x0 in base.elements() {
            for x1 in base.elements() {
                for r in base.elements() {
                    pts.push(self.point(x0, x1, r));
                }
            }
        }
        pts.push(Point::t_infinity());
        UnitalPointSet::new(pts, Point::t_infinity())
    }
}

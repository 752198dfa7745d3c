//! Fano planes through `V = (0,0,1)` whose line through the special point is
//! `VXY`, in a unital `U(1, b)`.
//!
//! Such a plane is `V, X = (0,s,1), Y = (0,t,1), P = (θh, kh, 1),
//! Q = (θ, k, 1), M = PX ∩ QY, N = PY ∩ QX`. Writing `b = b0 + b1·δ`, the
//! points P, Q, M, N lie on the unital iff
//!
//! ```text
//! box((θh)^2) + b1·N(θh) = box(kh)          (P)
//! box(θ^2)    + b1·N(θ)  = box(k)           (Q)
//! box((θW)^2) + b1·N(θW) = box(kW) + box(U) (M)
//! box((θZv)^2)+ b1·N(θZv)= box(kZv)+ box(Z) (N)
//! ```
//!
//! with `W = h(s+t)/(s+ht)`, `U = st(1+h)/(s+ht)`, `Zv = h(s+t)/(t+hs)`,
//! `Z = st(1+h)/(t+hs)`. For `h ∉ GF(q)` the first two equations fix k.
//! For `h ∈ GF(q)` they force `box(θ^2) + b1·N(θ) = 0` and leave `k0` free.
//! `k = 0` is allowed: it puts `P, Q` on the line `Y = 0`.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::config::{verify_fano, FanoConfig, FanoFlag};
use crate::error::{Error, Result};
use crate::gf::{base_json, ext_json, BaseElem, ExtElem, ExtField};
use crate::plane::Point;
use crate::unital::{OrthogonalBm, Unital};

use super::with_threads;

/// Parameters `(b1, θ = xk, k, h, s, t)` of a plane in `U(1, b0 + b1·δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpecialFanoParams {
    pub b1: BaseElem,
    pub theta: ExtElem,
    pub k: ExtElem,
    pub h: ExtElem,
    pub s: BaseElem,
    pub t: BaseElem,
}

impl SpecialFanoParams {
    /// Slope parameter `x = θ/k` of the line `VPQ = [1, x, 0]`; `None` when
    /// `k = 0` and `VPQ` is the line `Y = 0`.
    pub fn x(&self, field: &ExtField) -> Option<ExtElem> {
        field.div(self.theta, self.k).ok()
    }

    /// `h ∈ GF(q)`, where k is not determined by P and Q.
    pub fn is_degenerate(&self) -> bool {
        self.h.in_base()
    }

    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        let base = field.base();
        serde_json::json!({
            "b1": base_json(base, self.b1),
            "theta": ext_json(field, self.theta),
            "x": self.x(field).map(|x| ext_json(field, x)),
            "k": ext_json(field, self.k),
            "h": ext_json(field, self.h),
            "s": base_json(base, self.s),
            "t": base_json(base, self.t),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivedQuantities {
    pub w: ExtElem,
    pub u: ExtElem,
    pub zv: ExtElem,
    pub z: ExtElem,
}

pub fn derived_quantities(field: &ExtField, h: ExtElem, s: BaseElem, t: BaseElem) -> Result<DerivedQuantities> {
    let (se, te) = (ExtElem::from_base(s), ExtElem::from_base(t));
    let d1 = se + field.mul(h, te);
    let d2 = te + field.mul(h, se);
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::Degenerate("s + ht or t + hs vanishes"));
    }
    let num_w = field.mul(h, se + te);
    let num_u = field.scale(ExtElem::ONE + h, field.base().mul(s, t));
    Ok(DerivedQuantities {
        w: field.div(num_w, d1)?,
        u: field.div(num_u, d1)?,
        zv: field.div(num_w, d2)?,
        z: field.div(num_u, d2)?,
    })
}

/// The seven points in the order `V, X, Y, P, Q, M, N`.
pub fn params_to_points(field: &ExtField, p: &SpecialFanoParams) -> Result<[Point; 7]> {
    if p.theta.is_zero() || p.h.is_zero() || p.h == ExtElem::ONE {
        return Err(Error::Degenerate("θ and h must be nonzero and h ≠ 1"));
    }
    if p.s.is_zero() || p.t.is_zero() || p.s == p.t {
        return Err(Error::Degenerate("s, t must be distinct and nonzero"));
    }
    let dq = derived_quantities(field, p.h, p.s, p.t)?;
    let f = field;
    Ok([
        Point::origin(),
        Point::affine(ExtElem::ZERO, ExtElem::from_base(p.s)),
        Point::affine(ExtElem::ZERO, ExtElem::from_base(p.t)),
        Point::affine(f.mul(p.theta, p.h), f.mul(p.k, p.h)),
        Point::affine(p.theta, p.k),
        Point::affine(f.mul(p.theta, dq.w), f.mul(p.k, dq.w) + dq.u),
        Point::affine(f.mul(p.theta, dq.zv), f.mul(p.k, dq.zv) + dq.z),
    ])
}

/// `box(x^2) + b1·N(x)`, the δ-coefficient forced on y for `(x, y, 1)` to
/// lie on `U(1, b0 + b1·δ)`.
#[inline]
fn lhs(field: &ExtField, b1: BaseElem, x: ExtElem) -> BaseElem {
    field.boxed(field.square(x)) + field.base().mul(b1, field.norm(x))
}

/// The unique k with P and Q on `U(1, b0 + b1·δ)`, for `h ∉ GF(q)`.
pub fn solve_k(field: &ExtField, theta: ExtElem, h: ExtElem, b1: BaseElem) -> Result<ExtElem> {
    if theta.is_zero() {
        return Err(Error::Degenerate("θ = 0"));
    }
    if h.in_base() {
        return Err(Error::Degenerate("h ∈ GF(q) leaves k0 undetermined"));
    }
    let base = field.base();
    let k1 = lhs(field, b1, theta);
    let c2 = lhs(field, b1, field.mul(theta, h));
    // box(kh) = k0·h1 + k1·(h0 + h1)
    let k0 = base.div(c2 + base.mul(k1, h.c0 + h.c1), h.c1)?;
    Ok(ExtElem::new(k0, k1))
}

/// Whether P and Q lie on `U(1, b0 + b1·δ)`.
pub fn k_equations_hold(field: &ExtField, theta: ExtElem, h: ExtElem, b1: BaseElem, k: ExtElem) -> bool {
    lhs(field, b1, field.mul(theta, h)) == field.boxed(field.mul(k, h)) && lhs(field, b1, theta) == field.boxed(k)
}

/// `b1 ∈ GF(q)*` with `U(1, b1·δ)` a valid unital, i.e. `Tr(1/b1^2) = 0`.
pub fn valid_unit_b1(field: &ExtField) -> Vec<BaseElem> {
    let base = field.base();
    base.nonzero()
        .filter(|&b1| base.abs_trace(base.inv(b1).expect("nonzero")) == 0)
        .collect()
}

/// Result of the parametrised enumeration over one unital `U(1, b)`.
#[derive(Clone, Debug)]
pub struct SpecialEnumeration {
    pub field: Arc<ExtField>,
    pub b1: BaseElem,
    /// Accepted parameter tuples in enumeration order.
    pub accepted: Vec<SpecialFanoParams>,
    /// Distinct planes, sorted, with the number of tuples describing each.
    pub planes: Vec<(FanoConfig, u64)>,
}

impl SpecialEnumeration {
    pub fn raw_count(&self) -> u64 {
        self.accepted.len() as u64
    }

    pub fn dedup_count(&self) -> u64 {
        self.planes.len() as u64
    }

    pub fn degenerate_count(&self) -> u64 {
        self.accepted.iter().filter(|p| p.is_degenerate()).count() as u64
    }

    /// The common number of tuples per plane, if it is the same for all.
    pub fn multiplicity(&self) -> Option<u64> {
        let first = self.planes.first()?.1;
        self.planes.iter().all(|(_, c)| *c == first).then_some(first)
    }

    /// Planes in the whole unital with a line through the special point.
    /// Each such plane has exactly one special line and three points on it,
    /// and the affine points form one orbit of size q^3, so the total is
    /// `dedup · q^3 / 3`.
    pub fn whole_unital_total(&self) -> Option<u64> {
        let q = u64::from(self.field.q());
        let n = self.dedup_count() * q * q * q;
        n.is_multiple_of(3).then_some(n / 3)
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "b1": base_json(self.field.base(), self.b1),
            "raw_count": self.raw_count(),
            "dedup_count": self.dedup_count(),
            "degenerate_count": self.degenerate_count(),
            "multiplicity": self.multiplicity(),
            "whole_unital_total": self.whole_unital_total(),
        })
    }
}

struct HEntry {
    h: ExtElem,
    combos: Vec<(BaseElem, BaseElem, DerivedQuantities)>,
}

/// Enumerates every accepted tuple for `U(1, b)`. Work is split by θ and
/// collected in order, so the result is independent of `threads`.
pub fn enumerate_special_fanos(spec: &OrthogonalBm, threads: Option<usize>) -> Result<SpecialEnumeration> {
    if spec.a() != ExtElem::ONE {
        return Err(Error::InvalidSpec("parametrised enumeration needs a = 1".into()));
    }
    let field = spec.field_arc().clone();
    let f = &*field;
    let base = f.base();
    let b1 = f.boxed(spec.b());
    let special = spec.special_point();

    let table: Vec<HEntry> = f
        .elements()
        .filter(|&h| !h.is_zero() && h != ExtElem::ONE)
        .map(|h| {
            let mut combos = Vec::new();
            for s in base.nonzero() {
                for t in base.nonzero().filter(|&t| t != s) {
                    if let Ok(dq) = derived_quantities(f, h, s, t) {
                        combos.push((s, t, dq));
                    }
                }
            }
            HEntry { h, combos }
        })
        .collect();
    let thetas: Vec<ExtElem> = f.nonzero().collect();

    let per_theta = |theta: ExtElem| -> Vec<(SpecialFanoParams, FanoConfig)> {
        let mut out = Vec::new();
        let lhs_q = lhs(f, b1, theta);
        let mut ks = Vec::with_capacity(base.order() as usize);
        for entry in &table {
            let h = entry.h;
            ks.clear();
            if h.in_base() {
                if lhs_q.is_zero() {
                    ks.extend(base.elements().map(ExtElem::from_base));
                }
            } else {
                ks.push(solve_k(f, theta, h, b1).expect("θ ≠ 0, h ∉ GF(q)"));
            }
            for &(s, t, dq) in &entry.combos {
                let xm = f.mul(theta, dq.w);
                let xn = f.mul(theta, dq.zv);
                let (lm, ln) = (lhs(f, b1, xm), lhs(f, b1, xn));
                for &k in &ks {
                    let ym = f.mul(k, dq.w) + dq.u;
                    let yn = f.mul(k, dq.zv) + dq.z;
                    if lm != f.boxed(ym) || ln != f.boxed(yn) {
                        continue;
                    }
                    let p = SpecialFanoParams { b1, theta, k, h, s, t };
                    let pts = params_to_points(f, &p).expect("checked parameters");
                    if let Ok(fano) = verify_fano(f, &pts, |x| spec.contains(x), &special) {
                        out.push((p, fano));
                    }
                }
            }
        }
        out
    };

    let chunks: Vec<Vec<(SpecialFanoParams, FanoConfig)>> =
        with_threads(threads, || thetas.par_iter().map(|&t| per_theta(t)).collect())?;

    let mut accepted = Vec::new();
    let mut counts: BTreeMap<FanoConfig, u64> = BTreeMap::new();
    for (p, fano) in chunks.into_iter().flatten() {
        if fano.flag() != FanoFlag::BmSpecial {
            return Err(Error::Invariant("plane through VXY has no special line".into()));
        }
        accepted.push(p);
        *counts.entry(fano).or_insert(0) += 1;
    }
    Ok(SpecialEnumeration {
        field,
        b1,
        accepted,
        planes: counts.into_iter().collect(),
    })
}

/// Comparison of the enumerations for two unitals `U(1, b)` and `U(1, b')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub b1: BaseElem,
    pub b1_prime: BaseElem,
    pub dedup_counts: (u64, u64),
    pub raw_counts: (u64, u64),
    pub degenerate_counts: (u64, u64),
    /// Non-degenerate tuples of the first unital whose image, keeping
    /// `(θ, h, s, t)` and re-solving k, is accepted in the second.
    pub mapped: u64,
    pub unmatched: u64,
    /// Matched pairs where the M- or N-difference identity fails.
    pub identity_failures: u64,
}

impl PairReport {
    pub fn counts_equal(&self) -> bool {
        self.dedup_counts.0 == self.dedup_counts.1 && self.raw_counts.0 == self.raw_counts.1
    }

    /// The map is injective by construction; it is a bijection when every
    /// image is accepted and both sides have equally many tuples.
    pub fn is_bijection(&self) -> bool {
        let nd = (
            self.raw_counts.0 - self.degenerate_counts.0,
            self.raw_counts.1 - self.degenerate_counts.1,
        );
        self.unmatched == 0 && nd.0 == nd.1 && self.mapped == nd.0
    }

    pub fn holds(&self) -> bool {
        self.counts_equal()
            && self.degenerate_counts.0 == self.degenerate_counts.1
            && self.is_bijection()
            && self.identity_failures == 0
    }

    pub fn to_json(&self, field: &ExtField) -> serde_json::Value {
        let base = field.base();
        serde_json::json!({
            "b1": base_json(base, self.b1),
            "b1_prime": base_json(base, self.b1_prime),
            "dedup_counts": [self.dedup_counts.0, self.dedup_counts.1],
            "raw_counts": [self.raw_counts.0, self.raw_counts.1],
            "degenerate_counts": [self.degenerate_counts.0, self.degenerate_counts.1],
            "mapped": self.mapped,
            "unmatched": self.unmatched,
            "identity_failures": self.identity_failures,
            "bijection": self.is_bijection(),
            "holds": self.holds(),
        })
    }
}

/// Checks the correspondence `(θ, h, s, t, k) -> (θ, h, s, t, k')` between
/// two enumerations, and the identity
/// `(b1 + b1')·N(θ)·N(W) = box((k + k')·W)` (and its Zv analogue) on every
/// matched pair.
pub fn compare_enumerations(e1: &SpecialEnumeration, e2: &SpecialEnumeration) -> Result<PairReport> {
    if e1.field != e2.field {
        return Err(Error::InvalidSpec("enumerations over different fields".into()));
    }
    let f = &*e1.field;
    let base = f.base();
    let target: HashSet<&SpecialFanoParams> = e2.accepted.iter().collect();
    let db = e1.b1 + e2.b1;
    let (mut mapped, mut unmatched, mut identity_failures) = (0, 0, 0);
    for p in e1.accepted.iter().filter(|p| !p.is_degenerate()) {
        let k2 = solve_k(f, p.theta, p.h, e2.b1)?;
        let image = SpecialFanoParams { b1: e2.b1, k: k2, ..*p };
        if !target.contains(&image) {
            unmatched += 1;
            continue;
        }
        mapped += 1;
        let dq = derived_quantities(f, p.h, p.s, p.t)?;
        let nt = f.norm(p.theta);
        let dk = p.k + k2;
        let ok = [dq.w, dq.zv]
            .iter()
            .all(|&w| base.mul(base.mul(db, nt), f.norm(w)) == f.boxed(f.mul(dk, w)));
        if !ok {
            identity_failures += 1;
        }
    }
    Ok(PairReport {
        b1: e1.b1,
        b1_prime: e2.b1,
        dedup_counts: (e1.dedup_count(), e2.dedup_count()),
        raw_counts: (e1.raw_count(), e2.raw_count()),
        degenerate_counts: (e1.degenerate_count(), e2.degenerate_count()),
        mapped,
        unmatched,
        identity_failures,
    })
}

/// Enumerations for every valid `U(1, b1·δ)` and the pairwise comparisons.
#[derive(Clone, Debug)]
pub struct CountComparison {
    pub field: Arc<ExtField>,
    pub enumerations: Vec<SpecialEnumeration>,
    pub pairs: Vec<PairReport>,
}

impl CountComparison {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(PairReport::holds)
            && self
                .enumerations
                .iter()
                .all(|e| e.multiplicity().is_some() || e.planes.is_empty())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.field.q(),
            "enumerations": self.enumerations.iter().map(|e| e.summary_json()).collect::<Vec<_>>(),
            "pairs": self.pairs.iter().map(|p| p.to_json(&self.field)).collect::<Vec<_>>(),
            "holds": self.holds(),
        })
    }
}

pub fn compare_special_counts(field: &Arc<ExtField>, threads: Option<usize>) -> Result<CountComparison> {
    let delta = field.delta();
    let enumerations = valid_unit_b1(field)
        .into_iter()
        .map(|b1| {
            let spec = OrthogonalBm::new(field.clone(), ExtElem::ONE, field.scale(delta, b1))?;
            enumerate_special_fanos(&spec, threads)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for (i, e1) in enumerations.iter().enumerate() {
        for e2 in &enumerations[i + 1..] {
            pairs.push(compare_enumerations(e1, e2)?);
            pairs.push(compare_enumerations(e2, e1)?);
        }
    }
    Ok(CountComparison {
        field: field.clone(),
        enumerations,
        pairs,
    })
}

/// Successive rewritings of `(k + k')·W + (k + k')^q·W^q`, where k and k'
/// solve the P, Q equations for `b1` and `b1'`, down to
/// `W^(q+1)·(b1 + b1')·θ^(q+1)`. The first entry is the left side
/// `(b1 + b1')·θ^(q+1)·W^(q+1)`; every entry should be equal.
pub fn identity_chain(
    field: &ExtField,
    theta: ExtElem,
    h: ExtElem,
    s: BaseElem,
    t: BaseElem,
    b1: BaseElem,
    b1p: BaseElem,
) -> Result<Vec<ExtElem>> {
    let f = field;
    let q1 = u64::from(f.q()) + 1;
    let fr = |x: ExtElem| f.frobenius(x);
    let n = |x: ExtElem| f.pow(x, q1);
    let bx = |x: ExtElem| x + fr(x);
    let k = solve_k(f, theta, h, b1)?;
    let kp = solve_k(f, theta, h, b1p)?;
    let dq = derived_quantities(f, h, s, t)?;
    let (se, te) = (ExtElem::from_base(s), ExtElem::from_base(t));
    let db = ExtElem::from_base(b1 + b1p);
    let dk = k + kp;
    let st = se + te;
    let d1 = se + f.mul(h, te);
    let pre = f.div(st, n(d1))?;
    let nh = n(h);
    let nth = n(theta);
    let mul3 = |a, b, c| f.mul(f.mul(a, b), c);

    let lhs = mul3(db, nth, n(dq.w));
    let e0 = f.mul(dk, dq.w) + f.mul(fr(dk), fr(dq.w));
    let e1 = f.div(mul3(dk, h, st), d1)? + f.div(mul3(fr(dk), fr(h), st), fr(d1))?;
    let e2 = f.mul(pre, mul3(dk, se + f.mul(fr(h), te), h) + mul3(fr(dk), d1, fr(h)));
    let e3 = f.mul(
        pre,
        f.mul(se, f.mul(dk, h) + f.mul(fr(dk), fr(h))) + f.mul(te, f.mul(dk, nh) + f.mul(fr(dk), nh)),
    );
    let e4 = f.mul(
        pre,
        f.mul(se, bx(f.mul(k, h)) + bx(f.mul(kp, h))) + mul3(te, nh, bx(k) + bx(kp)),
    );
    let th = f.mul(theta, h);
    let sq = |x| f.square(x);
    let e5 = f.mul(
        pre,
        f.mul(
            se,
            bx(sq(th)) + mul3(ExtElem::from_base(b1), nth, nh) + bx(sq(th)) + mul3(ExtElem::from_base(b1p), nth, nh),
        ) + mul3(
            te,
            nh,
            bx(sq(theta)) + f.mul(ExtElem::from_base(b1), nth) + bx(sq(theta)) + f.mul(ExtElem::from_base(b1p), nth),
        ),
    );
    let e6 = f.mul(pre, f.mul(se, mul3(db, nth, nh)) + mul3(te, nh, f.mul(db, nth)));
    let e7 = f.mul(pre, f.mul(st, mul3(db, nth, nh)));
    let e8 = mul3(n(f.div(f.mul(h, st), d1)?), db, nth);
    let e9 = mul3(n(dq.w), db, nth);
    Ok(vec![lhs, e0, e1, e2, e3, e4, e5, e6, e7, e8, e9])
}

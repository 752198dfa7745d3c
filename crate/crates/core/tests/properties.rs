//! Property tests for the field tower, the plane, the unitals and the
//! configuration checks. Arithmetic is compared against a schoolbook
//! carry-less multiplier written here, not the library's log tables.

use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use bmfano::config::{
    diagonal_completion, extend_onan_to_fano, fano_isomorphism, verify_fano, verify_onan, FanoFlag, FANO_LINES,
};
use bmfano::discovery::{
    enumerate_onans, enumerate_special_fanos, identity_chain, k_equations_hold, search_ordinary_fanos, solve_k,
    valid_unit_b1, UnitalIncidence,
};
use bmfano::gf::{parse_ext, BaseElem, BaseField, ExtElem, ExtField};
use bmfano::plane::{collinear, incident, join, meet, Line, Point};
use bmfano::unital::{apply_equivalence, are_equivalent, OrthogonalBm, TitsUnital, Unital};

/// `a·b mod modulus` by shift and add.
fn clmul_mod(a: u32, b: u32, modulus: u32, m: u32) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> m & 1 == 1 {
            a ^= modulus;
        }
    }
    acc
}

/// `(a0 + a1δ)(b0 + b1δ)` with `δ² = δ + v`.
fn ext_mul_oracle(f: &ExtField, a: ExtElem, b: ExtElem) -> ExtElem {
    let (m, p) = (f.base().degree(), f.base().modulus());
    let mul = |x: BaseElem, y: BaseElem| clmul_mod(x.bits(), y.bits(), p, m);
    let hi = mul(a.c1, b.c1);
    let c0 = mul(a.c0, b.c0) ^ clmul_mod(hi, f.v().bits(), p, m);
    let c1 = mul(a.c0, b.c1) ^ mul(a.c1, b.c0) ^ hi;
    ExtElem::new(BaseElem::from_bits_unchecked(c0), BaseElem::from_bits_unchecked(c1))
}

fn orthogonal(m: u32) -> Arc<ExtField> {
    static CACHE: OnceLock<Vec<Arc<ExtField>>> = OnceLock::new();
    CACHE.get_or_init(|| (2..=6).map(|m| Arc::new(ExtField::orthogonal(m).unwrap())).collect())[m as usize - 2].clone()
}

fn ext_elem(f: &ExtField, bits: u32) -> ExtElem {
    let m = f.base().degree();
    let mask = (1 << m) - 1;
    ExtElem::new(
        BaseElem::from_bits_unchecked(bits & mask),
        BaseElem::from_bits_unchecked(bits >> m & mask),
    )
}

fn base_elem(f: &BaseField, bits: u32) -> BaseElem {
    BaseElem::from_bits_unchecked(bits & (f.order() - 1))
}

fn point(f: &ExtField, c: [u32; 3]) -> Option<Point> {
    Point::new(f, c.map(|x| ext_elem(f, x))).ok()
}

/// `U(1, b1·δ)` at q = 4 with its incidence structure and O'Nan list.
struct Q4 {
    field: Arc<ExtField>,
    unital: OrthogonalBm,
    onans: Vec<bmfano::config::OnanConfig>,
}

fn q4() -> &'static Q4 {
    static CELL: OnceLock<Q4> = OnceLock::new();
    CELL.get_or_init(|| {
        let field = orthogonal(2);
        let unital = OrthogonalBm::new(field.clone(), ExtElem::ONE, field.delta()).unwrap();
        let inc = UnitalIncidence::build(&field, &unital.point_set());
        let onans = enumerate_onans(&field, &inc, None).unwrap();
        Q4 { field, unital, onans }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn base_multiplication_matches_oracle(m in 2u32..=10, a: u32, b: u32) {
        let f = BaseField::new(m).unwrap();
        let (x, y) = (base_elem(&f, a), base_elem(&f, b));
        prop_assert_eq!(f.mul(x, y).bits(), clmul_mod(x.bits(), y.bits(), f.modulus(), m));
    }

    #[test]
    fn base_field_axioms(m in 2u32..=10, a: u32, b: u32, c: u32) {
        let f = BaseField::new(m).unwrap();
        let (x, y, z) = (base_elem(&f, a), base_elem(&f, b), base_elem(&f, c));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.mul(x, y + z), f.mul(x, y) + f.mul(x, z));
        prop_assert_eq!(f.mul(x, y), f.mul(y, x));
        prop_assert_eq!(f.pow(x, u64::from(f.order())), x);
        prop_assert_eq!(f.square(f.sqrt(x)), x);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), BaseElem::ONE);
        }
    }

    #[test]
    fn absolute_trace_is_additive_onto_gf2(m in 2u32..=10, a: u32, b: u32) {
        let f = BaseField::new(m).unwrap();
        let (x, y) = (base_elem(&f, a), base_elem(&f, b));
        prop_assert_eq!(f.abs_trace(x + y), f.abs_trace(x) ^ f.abs_trace(y));
        prop_assert_eq!(f.abs_trace(f.square(x)), f.abs_trace(x));
        prop_assert_eq!(f.rel_trace(x, 1).unwrap().bits(), u32::from(f.abs_trace(x)));
    }

    #[test]
    fn ext_multiplication_matches_oracle(m in 2u32..=6, a: u32, b: u32, c: u32) {
        let f = orthogonal(m);
        let (x, y, z) = (ext_elem(&f, a), ext_elem(&f, b), ext_elem(&f, c));
        prop_assert_eq!(f.mul(x, y), ext_mul_oracle(&f, x, y));
        prop_assert_eq!(f.mul(x, y + z), f.mul(x, y) + f.mul(x, z));
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), ExtElem::ONE);
        }
    }

    #[test]
    fn frobenius_norm_and_box_closed_forms(m in 2u32..=6, a: u32, b: u32) {
        let f = orthogonal(m);
        let (x, y) = (ext_elem(&f, a), ext_elem(&f, b));
        let q = u64::from(f.q());
        prop_assert_eq!(f.frobenius(x), f.pow(x, q));
        prop_assert_eq!(f.frobenius(f.frobenius(x)), x);
        prop_assert_eq!(f.frobenius(f.mul(x, y)), f.mul(f.frobenius(x), f.frobenius(y)));
        prop_assert_eq!(ExtElem::from_base(f.norm(x)), f.pow(x, q + 1));
        prop_assert_eq!(ExtElem::from_base(f.boxed(x)), x + f.frobenius(x));
        prop_assert_eq!(f.norm(f.mul(x, y)), f.base().mul(f.norm(x), f.norm(y)));
    }

    #[test]
    fn parse_round_trips_both_renderings(m in 2u32..=6, a: u32) {
        let f = orthogonal(m);
        let x = ext_elem(&f, a);
        prop_assert_eq!(parse_ext(&f, &f.hex(x)).unwrap(), x);
        prop_assert_eq!(parse_ext(&f, &f.power_notation(x)).unwrap(), x);
    }

    #[test]
    fn join_and_meet_are_incident(m in 2u32..=4, c: [[u32; 3]; 2]) {
        let f = orthogonal(m);
        let (Some(p), Some(r)) = (point(&f, c[0]), point(&f, c[1])) else { return Ok(()) };
        prop_assume!(p != r);
        let l = join(&f, &p, &r).unwrap();
        prop_assert!(incident(&f, &p, &l) && incident(&f, &r, &l));
        let dual = Line::new(&f, p.coords()).unwrap();
        let dual2 = Line::new(&f, r.coords()).unwrap();
        let x = meet(&f, &dual, &dual2).unwrap();
        prop_assert!(incident(&f, &x, &dual) && incident(&f, &x, &dual2));
    }

    #[test]
    fn points_are_projective(m in 2u32..=4, c: [u32; 3], s: u32) {
        let f = orthogonal(m);
        let Some(p) = point(&f, c) else { return Ok(()) };
        let k = ext_elem(&f, s);
        prop_assume!(!k.is_zero());
        let scaled = Point::new(&f, p.coords().map(|x| f.mul(x, k))).unwrap();
        prop_assert_eq!(scaled, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every line of PG(2,16) meets a BM unital in 1 or 5 points.
    #[test]
    fn secant_law_q4(b1 in 1u32..4, a: u32, l: [u32; 3]) {
        let f = orthogonal(2);
        let spec = OrthogonalBm::new(f.clone(), ext_elem(&f, a), ExtElem::new(BaseElem::ZERO, base_elem(f.base(), b1)));
        let Ok(spec) = spec else { return Ok(()) };
        let Ok(line) = Line::new(&f, l.map(|x| ext_elem(&f, x))) else { return Ok(()) };
        let hits = spec.point_set().points().iter().filter(|p| incident(&f, p, &line)).count();
        prop_assert!(hits == 1 || hits == 5, "{hits} points");
    }

    /// Four lines in general position in PG(2,q^2): the three diagonal
    /// points are collinear, dually the diagonals are concurrent.
    #[test]
    fn quadrilateral_diagonals_concur(m in 2u32..=4, ls: [[u32; 3]; 4]) {
        let f = orthogonal(m);
        let lines: Option<Vec<Line>> = ls.iter().map(|c| Line::new(&f, c.map(|x| ext_elem(&f, x))).ok()).collect();
        let Some(lines) = lines else { return Ok(()) };
        let lines: [Line; 4] = lines.try_into().unwrap();
        let Ok(onan) = verify_onan(&f, lines, |_| true) else { return Ok(()) };
        let d = diagonal_completion(&f, &onan).unwrap();
        for l in &d.diagonals {
            prop_assert!(incident(&f, &d.point, l));
        }
    }

    /// BM equivalence is reflexive and symmetric, and witnesses act as
    /// claimed.
    #[test]
    fn equivalence_is_symmetric(m in 2u32..=3, a1: u32, b1: u32, a2: u32, b2: u32) {
        let f = orthogonal(m);
        let mk = |a, b| OrthogonalBm::new(f.clone(), ext_elem(&f, a), ext_elem(&f, b)).ok();
        let (Some(s1), Some(s2)) = (mk(a1, b1), mk(a2, b2)) else { return Ok(()) };
        prop_assert!(are_equivalent(&s1, &s1).is_some());
        let fwd = are_equivalent(&s1, &s2);
        prop_assert_eq!(fwd.is_some(), are_equivalent(&s2, &s1).is_some());
        if let Some(w) = fwd {
            prop_assert_eq!(apply_equivalence(&f, s1.a(), s1.b(), &w), (s2.a(), s2.b()));
        }
    }

    #[test]
    fn equivalence_is_transitive(a: [u32; 3], b: [u32; 3]) {
        let f = orthogonal(2);
        let mk = |i: usize| OrthogonalBm::new(f.clone(), ext_elem(&f, a[i]), ext_elem(&f, b[i])).ok();
        let (Some(s0), Some(s1), Some(s2)) = (mk(0), mk(1), mk(2)) else { return Ok(()) };
        if are_equivalent(&s0, &s1).is_some() && are_equivalent(&s1, &s2).is_some() {
            prop_assert!(are_equivalent(&s0, &s2).is_some());
        }
        // The discriminant's subfield is an invariant.
        if are_equivalent(&s0, &s1).is_some() {
            prop_assert_eq!(s0.group_order().unwrap(), s1.group_order().unwrap());
        }
    }

    #[test]
    fn point_sets_have_q3_plus_1_points(m in 2u32..=3, a: u32, b: u32) {
        let f = orthogonal(m);
        let Ok(spec) = OrthogonalBm::new(f.clone(), ext_elem(&f, a), ext_elem(&f, b)) else { return Ok(()) };
        let set = spec.point_set();
        let q = u64::from(f.q());
        prop_assert_eq!(set.len() as u64, q * q * q + 1);
        prop_assert!(set.points().iter().all(|p| spec.contains(p)));
    }

    #[test]
    fn solve_k_round_trip(m in 2u32..=6, t: u32, h: u32, i: usize) {
        let f = orthogonal(m);
        let (theta, h) = (ext_elem(&f, t), ext_elem(&f, h));
        prop_assume!(!theta.is_zero() && !h.in_base());
        let b1s = valid_unit_b1(&f);
        let b1 = b1s[i % b1s.len()];
        let k = solve_k(&f, theta, h, b1).unwrap();
        prop_assert!(k_equations_hold(&f, theta, h, b1, k));
        // k is unique: any other k1 breaks one equation.
        let other = k + ExtElem::ONE;
        prop_assert!(!k_equations_hold(&f, theta, h, b1, other));
    }

    #[test]
    fn identity_chain_is_constant(m in 2u32..=6, t: u32, h: u32, s: u32, u: u32, i: usize, j: usize) {
        let f = orthogonal(m);
        let base = f.base();
        let (theta, h) = (ext_elem(&f, t), ext_elem(&f, h));
        let (s, u) = (base_elem(base, s), base_elem(base, u));
        prop_assume!(!theta.is_zero() && !h.in_base() && !s.is_zero() && !u.is_zero() && s != u);
        let b1s = valid_unit_b1(&f);
        let chain = identity_chain(&f, theta, h, s, u, b1s[i % b1s.len()], b1s[j % b1s.len()]);
        let Ok(chain) = chain else { return Ok(()) };
        prop_assert!(chain.windows(2).all(|w| w[0] == w[1]), "{:?}", chain);
    }

    /// An O'Nan configuration extends to a Fano plane exactly when its
    /// diagonal point is a unital point completing the seven points.
    #[test]
    fn extension_agrees_with_verification(i: usize) {
        let ctx = q4();
        let (f, u) = (&*ctx.field, &ctx.unital);
        let onan = &ctx.onans[i % ctx.onans.len()];
        let special = u.special_point();
        let ext = extend_onan_to_fano(f, onan, |p| u.contains(p), &special).unwrap();
        let d = diagonal_completion(f, onan).unwrap();
        let v = onan.vertices();
        let seven = [v[0], v[1], v[2], v[3], v[4], v[5], d.point];
        let direct = verify_fano(f, &seven, |p| u.contains(p), &special);
        prop_assert_eq!(ext.is_some(), direct.is_ok());
        if let (Some(a), Ok(b)) = (ext, direct) {
            prop_assert_eq!(a.points(), b.points());
        }
        // The diagonal point lies on none of the four lines.
        prop_assert!(onan.lines().iter().all(|l| !incident(f, &d.point, l)));
        // Each opposite pair is collinear with the diagonal point.
        for (a, b) in d.opposite {
            prop_assert!(collinear(f, &a, &b, &d.point));
        }
    }

    /// Every verified plane's incidence matrix is isomorphic to the standard
    /// Fano plane, and the isomorphism survives relabelling the points.
    #[test]
    fn verified_planes_are_fano(i: usize, perm in Just((0..7usize).collect::<Vec<_>>()).prop_shuffle()) {
        let e = special_q4();
        let (plane, _) = &e.planes[i % e.planes.len()];
        let f = &*e.field;
        let matrix = plane.incidence_matrix(f);
        let map = fano_isomorphism(&matrix).expect("isomorphic");
        for j in 0..7 {
            let mut image: Vec<usize> = matrix.iter().zip(map).filter(|(row, _)| row[j]).map(|(_, p)| p).collect();
            image.sort();
            let standard = FANO_LINES.iter().any(|l| {
                let mut l = *l;
                l.sort();
                l.as_slice() == image.as_slice()
            });
            prop_assert!(standard, "line {} maps to {:?}", j, image);
        }
        let shuffled: [[bool; 7]; 7] = std::array::from_fn(|r| matrix[perm[r]]);
        prop_assert!(fano_isomorphism(&shuffled).is_some());
        prop_assert_eq!(plane.flag(), FanoFlag::BmSpecial);
    }
}

fn special_q4() -> &'static bmfano::discovery::SpecialEnumeration {
    static CELL: OnceLock<bmfano::discovery::SpecialEnumeration> = OnceLock::new();
    CELL.get_or_init(|| enumerate_special_fanos(&q4().unital, None).unwrap())
}

#[test]
fn non_fano_matrix_is_rejected() {
    let mut m = [[false; 7]; 7];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
        row[(i + 1) % 7] = true;
        row[(i + 2) % 7] = true;
    }
    assert!(fano_isomorphism(&m).is_none());
}

#[test]
fn budgeted_q8_search_finds_ordinary_planes() {
    let f = orthogonal(3);
    let spec = OrthogonalBm::new(f.clone(), ExtElem::ONE, f.mul(f.w_pow(3), f.delta())).unwrap();
    let set = spec.point_set();
    let inc = UnitalIncidence::build(&f, &set);
    let s = search_ordinary_fanos(&f, &inc, Some(5_000), None).unwrap();
    assert!(!s.exhaustive());
    assert!(!s.planes.is_empty());
    for plane in &s.planes {
        assert_eq!(plane.flag(), FanoFlag::BmOrdinary);
        let again = verify_fano(&f, plane.points(), |p| set.contains(p), &set.special()).unwrap();
        assert_eq!(again.lines(), plane.lines());
    }
}

#[test]
fn tits_point_set_size() {
    let u = TitsUnital::with_degree(3).unwrap();
    assert_eq!(u.point_set().len(), 8 * 8 * 8 + 1);
}

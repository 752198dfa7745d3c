//! Equivalence classes of orthogonal BM unitals U(a,b) in PG(2,q^2).
//!
//! Because `(a, b) ~ (a, b + u)` for `u ∈ GF(q)`, every spec is normalised to
//! `b = b1·δ`, leaving the node set `(a, b1) ∈ GF(q^2) × GF(q)*`. On these
//! nodes the equivalence group acts by
//!
//! ```text
//! γ: (a, b1) -> (a·γ^2, b1·γ^(q+1))
//! ν: (a, b1) -> (a·ν,   b1·ν)
//! τ: (a, b1) -> (a^2,   b1^2)
//! ```
//!
//! (τ also moves δ to δ + c with c ∈ GF(q), which the normalisation absorbs).
//! Orbits are the connected components of the graph whose edges are these
//! generators applied with γ, ν primitive; a union-find collects them.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::bm::OrthogonalBm;
use crate::error::{Error, Result};
use crate::gf::{BaseElem, ExtElem, ExtField};

/// Class counts, including the classical class, for q = 4, 8, 16, 32, 64.
pub fn known_class_count(q: u32) -> Option<usize> {
    match q {
        4 => Some(2),
        8 => Some(2),
        16 => Some(4),
        32 => Some(4),
        64 => Some(8),
        _ => None,
    }
}

struct UnionFind {
    parent: Vec<u32>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let next = self.parent[x as usize];
            self.parent[x as usize] = self.parent[next as usize];
            x = next;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra as usize].cmp(&self.rank[rb as usize]) {
            std::cmp::Ordering::Less => self.parent[ra as usize] = rb,
            std::cmp::Ordering::Greater => self.parent[rb as usize] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb as usize] = ra;
                self.rank[ra as usize] += 1;
            }
        }
    }
}

/// One equivalence class of valid specs.
#[derive(Clone, Debug)]
pub struct UnitalClass {
    /// Canonical representative, preferring `a = 1`, then `a ∈ GF(q)*` with
    /// `b = δ`, then the smallest `(a, b)`.
    pub representative: OrthogonalBm,
    /// A member with `a = 1`, if the class has one.
    pub unit_form: Option<OrthogonalBm>,
    /// A member with `a ∈ GF(q)*` and `b = δ`, if the class has one.
    pub fengli_form: Option<OrthogonalBm>,
    /// Number of normalised specs `(a, b1·δ)` in the class.
    pub size: usize,
    /// Discriminants occurring in the class, sorted.
    pub discriminants: Vec<BaseElem>,
}

impl UnitalClass {
    pub fn is_classical(&self) -> bool {
        self.representative.is_classical()
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub field: Arc<ExtField>,
    pub classes: Vec<UnitalClass>,
}

impl Classification {
    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn count(&self) -> usize {
        self.classes.len()
    }

    /// Whether the count agrees with the known table, when q is tabulated.
    pub fn matches_known_count(&self) -> Option<bool> {
        known_class_count(self.q()).map(|n| n == self.count())
    }

    pub fn non_classical(&self) -> impl Iterator<Item = &UnitalClass> {
        self.classes.iter().filter(|c| !c.is_classical())
    }
}

/// Classifies all orthogonal BM unitals over the given orthogonal tower.
pub fn classify_unitals(field: &Arc<ExtField>) -> Result<Classification> {
    let f = &**field;
    let base = f.base();
    let qm1 = (base.order() - 1) as usize;
    let size = 1usize << (2 * base.degree());
    let node =
        |a: ExtElem, b1: BaseElem| -> u32 { (f.index_of(a) * qm1 + base.log(b1).expect("b1 nonzero") as usize) as u32 };
    let decode = |n: u32| -> (ExtElem, BaseElem) {
        let n = n as usize;
        (f.from_index(n / qm1), base.w_pow((n % qm1) as i64))
    };
    let valid = |a: ExtElem, b1: BaseElem| -> bool {
        let d = base.mul(f.norm(a), base.square(base.inv(b1).expect("b1 nonzero")));
        base.abs_trace(d) == 0
    };

    let g = f.generator();
    let g2 = f.square(g);
    let ng = f.norm(g);
    let w = base.generator();

    let mut uf = UnionFind::new(size * qm1);
    let mut is_valid = vec![false; size * qm1];
    for a in f.elements() {
        for b1 in base.nonzero() {
            if !valid(a, b1) {
                continue;
            }
            let n = node(a, b1);
            is_valid[n as usize] = true;
            let images = [
                (f.mul(a, g2), base.mul(b1, ng)),
                (f.scale(a, w), base.mul(b1, w)),
                (f.square(a), base.square(b1)),
            ];
            for (a2, b2) in images {
                if !valid(a2, b2) {
                    return Err(Error::Invariant(format!(
                        "equivalence action left the valid spec set at node {n}"
                    )));
                }
                uf.union(n, node(a2, b2));
            }
        }
    }

    let mut members: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for n in 0..(size * qm1) as u32 {
        if is_valid[n as usize] {
            let root = uf.find(n);
            members.entry(root).or_default().push(n);
        }
    }

    let delta = f.delta();
    let mut classes = Vec::with_capacity(members.len());
    for nodes in members.values() {
        let specs: Vec<(ExtElem, BaseElem)> = nodes.iter().map(|&n| decode(n)).collect();
        let to_spec = |(a, b1): (ExtElem, BaseElem)| OrthogonalBm::new(field.clone(), a, f.scale(delta, b1));
        let unit = specs
            .iter()
            .filter(|(a, _)| *a == ExtElem::ONE)
            .min_by_key(|(_, b1)| *b1)
            .copied();
        let fengli = specs
            .iter()
            .filter(|(a, b1)| a.in_base() && !a.is_zero() && *b1 == BaseElem::ONE)
            .min_by_key(|(a, _)| *a)
            .copied();
        let classical = specs
            .iter()
            .find(|(a, b1)| a.is_zero() && *b1 == BaseElem::ONE)
            .copied();
        let smallest = *specs.iter().min().expect("class is non-empty");
        let rep = classical.or(unit).or(fengli).unwrap_or(smallest);

        let mut discriminants: Vec<BaseElem> = specs
            .iter()
            .map(|&(a, b1)| base.mul(f.norm(a), base.square(base.inv(b1).expect("nonzero"))))
            .collect();
        discriminants.sort();
        discriminants.dedup();

        classes.push(UnitalClass {
            representative: to_spec(rep)?,
            unit_form: unit.map(to_spec).transpose()?,
            fengli_form: fengli.map(to_spec).transpose()?,
            size: specs.len(),
            discriminants,
        });
    }
    // classical first, then by representative
    classes.sort_by_key(|c| (!c.is_classical(), c.representative.a(), c.representative.b()));
    Ok(Classification {
        field: field.clone(),
        classes,
    })
}

/// Classifies over the default orthogonal tower for q ∈ {4, 8, 16, 32, 64}.
pub fn classify_order(q: u32) -> Result<Classification> {
    if known_class_count(q).is_none() {
        return Err(Error::UnsupportedOrder(q));
    }
    let field = Arc::new(ExtField::orthogonal(q.trailing_zeros())?);
    classify_unitals(&field)
}

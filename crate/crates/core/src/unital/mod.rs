//! Unitals in PG(2,q^2): orthogonal Buekenhout-Metz unitals U(a,b), the
//! Buekenhout-Tits unital, and their point sets.

mod bm;
mod classify;
mod tits;

use std::collections::HashSet;

pub use bm::{
    apply_equivalence, are_equivalent, discriminant, group_order_for_discriminant, EquivalenceWitness, OrthogonalBm,
};
pub use classify::{classify_order, classify_unitals, known_class_count, Classification, UnitalClass};
pub use tits::TitsUnital;

use crate::gf::ExtField;
use crate::plane::Point;

/// A unital given by a membership predicate.
pub trait Unital: Sync {
    fn field(&self) -> &ExtField;

    fn contains(&self, p: &Point) -> bool;

    /// The special point at infinity, `(0, 1, 0)` for every family here.
    fn special_point(&self) -> Point {
        Point::t_infinity()
    }

    /// All q^3 + 1 points.
    fn point_set(&self) -> UnitalPointSet;
}

/// An explicit unital point set, sorted canonically.
#[derive(Clone, Debug)]
pub struct UnitalPointSet {
    points: Vec<Point>,
    special: Point,
    lookup: HashSet<Point>,
}

impl UnitalPointSet {
    pub fn new(mut points: Vec<Point>, special: Point) -> Self {
        points.sort();
        points.dedup();
        let lookup = points.iter().copied().collect();
        UnitalPointSet {
            points,
            special,
            lookup,
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn special(&self) -> Point {
        self.special
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.lookup.contains(p)
    }
}

//! Grading groups and bicharacters.
//!
//! A grading group is a finitely generated abelian group given as a direct
//! sum of cyclic factors (order 0 meaning an infinite factor). A bicharacter
//! assigns a unit of the field to each pair of generators and extends to the
//! whole group multiplicatively in both arguments; it supplies the
//! commutation factors that color every law in the crate.

use crate::field::{FieldSpec, Scalar};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("element has {got} coordinates, group has rank {want}")]
    RankMismatch { got: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradingGroup {
    /// One entry per cyclic factor; 0 denotes an infinite cyclic factor.
    cyclic_orders: Vec<u64>,
}

/// A group element in canonical coordinates: reduced modulo the order on
/// finite factors, arbitrary integers on infinite ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GradingGroup {
    pub fn new(cyclic_orders: Vec<u64>) -> GradingGroup {
        GradingGroup { cyclic_orders }
    }

    pub fn trivial() -> GradingGroup {
        GradingGroup::new(Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<GroupElement, GradingError> {
        if coords.len() != self.rank() {
            return Err(GradingError::RankMismatch {
                got: coords.len(),
                want: self.rank(),
            });
        }
        let mut coords = coords;
        self.canonicalize(&mut coords);
        Ok(GroupElement { coords })
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let mut coords: Vec<i64> = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x.checked_add(*y).expect("degree overflow"))
            .collect();
        self.canonicalize(&mut coords);
        GroupElement { coords }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        let mut coords: Vec<i64> = a.coords.iter().map(|x| -x).collect();
        self.canonicalize(&mut coords);
        GroupElement { coords }
    }

    fn canonicalize(&self, coords: &mut [i64]) {
        for (c, &m) in coords.iter_mut().zip(&self.cyclic_orders) {
            if m > 0 {
                *c = c.rem_euclid(m as i64);
            }
        }
    }
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// What a bicharacter table can violate, reported per generator pair.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BicharacterViolation {
    #[error("entry ({i},{j}) is zero, so it has no inverse")]
    NotUnit { i: usize, j: usize },
    #[error("entries ({i},{j}) and ({j},{i}) do not multiply to 1")]
    SkewSymmetry { i: usize, j: usize },
    #[error("entry ({i},{j}) raised to the factor order {order} is not 1")]
    OrderConsistency { i: usize, j: usize, order: u64 },
}

/// Bicharacter given by its values on generator pairs; evaluation extends
/// biadditively in the exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bicharacter {
    spec: FieldSpec,
    table: Vec<Vec<Scalar>>,
}

impl Bicharacter {
    pub fn new(spec: FieldSpec, table: Vec<Vec<Scalar>>) -> Bicharacter {
        Bicharacter { spec, table }
    }

    /// The trivial bicharacter (all commutation factors 1).
    pub fn trivial(spec: FieldSpec, rank: usize) -> Bicharacter {
        Bicharacter {
            spec,
            table: vec![vec![spec.one(); rank]; rank],
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn table(&self) -> &[Vec<Scalar>] {
        &self.table
    }

    pub fn eval(&self, a: &GroupElement, b: &GroupElement) -> Scalar {
        let mut acc = self.spec.one();
        for (i, &x) in a.coords().iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coords().iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let e = x as i128 * y as i128;
                acc = acc.mul(&pow_i128(&self.table[i][j], e));
            }
        }
        acc
    }

    /// Checks the axioms that are not automatic from the biadditive
    /// extension: entries are units, opposite entries multiply to 1, and
    /// entries respect the orders of finite factors (so evaluation is well
    /// defined on canonical coordinates).
    pub fn validate(&self, group: &GradingGroup) -> Vec<BicharacterViolation> {
        let mut violations = Vec::new();
        let rank = group.rank();
        assert_eq!(self.table.len(), rank, "table size must match group rank");
        for i in 0..rank {
            assert_eq!(self.table[i].len(), rank, "table must be square");
            for j in 0..rank {
                if self.table[i][j].is_zero() {
                    violations.push(BicharacterViolation::NotUnit { i, j });
                }
            }
        }
        if violations.iter().any(|v| matches!(v, BicharacterViolation::NotUnit { .. })) {
            return violations;
        }
        for i in 0..rank {
            for j in i..rank {
                if !self.table[i][j].mul(&self.table[j][i]).is_one() {
                    violations.push(BicharacterViolation::SkewSymmetry { i, j });
                }
            }
        }
        for (i, &m) in group.orders().iter().enumerate() {
            if m == 0 {
                continue;
            }
            for j in 0..rank {
                for (a, b) in [(i, j), (j, i)] {
                    if !pow_i128(&self.table[a][b], m as i128).is_one() {
                        violations.push(BicharacterViolation::OrderConsistency {
                            i: a,
                            j: b,
                            order: m,
                        });
                    }
                }
            }
        }
        violations.sort_by_key(|v| format!("{v:?}"));
        violations.dedup();
        violations
    }
}

fn pow_i128(base: &Scalar, e: i128) -> Scalar {
    let spec = base.spec();
    if e == 0 {
        return spec.one();
    }
    let b = if e < 0 {
        base.inv().expect("bicharacter entries are units")
    } else {
        base.clone()
    };
    let mut acc = spec.one();
    let mut cur = b;
    let mut n = e.unsigned_abs();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&cur);
        }
        cur = cur.mul(&cur);
        n >>= 1;
    }
    acc
}

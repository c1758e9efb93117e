//! Farey fractions, Farey plans and Farey parallelograms.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Coord, EdgeClass, EdgeInstance, LatticePoint, Segment};

/// Non-negative fraction `num/den` in lowest terms with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fraction<T = i64> {
    pub num: T,
    pub den: T,
}

impl<T: Coord> Fraction<T> {
    /// Builds a reduced fraction; `den` must be positive.
    pub fn new(num: T, den: T) -> Self {
        assert!(den > T::zero(), "fraction denominator must be positive");
        let g = num.gcd(&den);
        Fraction { num: num / g, den: den / g }
    }

    pub fn mediant(&self, other: &Self) -> Result<Self> {
        let num = self.num.checked_add(&other.num);
        let den = self.den.checked_add(&other.den);
        match (num, den) {
            (Some(num), Some(den)) => Ok(Fraction { num, den }),
            _ => Err(Error::Overflow(format!("mediant of {self} and {other}"))),
        }
    }
}

impl<T: Coord> Ord for Fraction<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

impl<T: Coord> PartialOrd for Fraction<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: fmt::Display> fmt::Display for Fraction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Farey sequence of order `n >= 1`, built by repeated mediant insertion.
pub fn farey_sequence<T: Coord>(n: T) -> Vec<Fraction<T>> {
    assert!(n >= T::one(), "Farey order must be at least 1");
    let mut seq = vec![Fraction { num: T::zero(), den: T::one() }, Fraction { num: T::one(), den: T::one() }];
    let mut k = T::one() + T::one();
    while k <= n {
        let mut next = Vec::with_capacity(seq.len() * 2);
        for w in seq.windows(2) {
            next.push(w[0]);
            if w[0].den + w[1].den == k {
                next.push(Fraction { num: w[0].num + w[1].num, den: k });
            }
        }
        next.push(*seq.last().unwrap());
        seq = next;
        k = k + T::one();
    }
    seq
}

/// `min(x, y) / max(x, y)`.
pub fn farey_flip_map<T: Coord>(e: &EdgeClass<T>) -> Fraction<T> {
    let (lo, hi) = if e.x <= e.y { (e.x, e.y) } else { (e.y, e.x) };
    Fraction { num: lo, den: hi }
}

/// Inverse of [`farey_flip_map`], oriented like `context`.
pub fn farey_flip_inverse<T: Coord>(f: &Fraction<T>, context: &EdgeClass<T>) -> EdgeClass<T> {
    let (x, y) = if context.x >= context.y { (f.den, f.num) } else { (f.num, f.den) };
    EdgeClass { x, y, sector: context.sector }
}

/// Sequence of Farey fractions leading to the image of an edge class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyPlan<T = i64> {
    pub edge: EdgeClass<T>,
    pub fractions: Vec<Fraction<T>>,
}

impl<T: Coord> FareyPlan<T> {
    pub fn len(&self) -> usize {
        self.fractions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fractions.is_empty()
    }
}

impl<T: Coord> fmt::Display for FareyPlan<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.fractions.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Walks the Stern-Brocot bracket from `1/1` towards the image of `e`.
pub fn farey_plan<T: Coord>(e: &EdgeClass<T>) -> Result<FareyPlan<T>> {
    let mut fractions = Vec::new();
    if e.is_unit() {
        return Ok(FareyPlan { edge: *e, fractions });
    }
    let target = farey_flip_map(e);
    let (zero, one) = (T::zero(), T::one());
    let mut d = Fraction { num: one, den: one };
    let mut left = Fraction { num: zero, den: one };
    let mut right: Option<Fraction<T>> = None;
    loop {
        fractions.push(d);
        if d == target {
            break;
        }
        if target > d {
            let r = right.ok_or_else(|| Error::Internal("Farey bracket has no right end".into()))?;
            let m = d.mediant(&r)?;
            left = d;
            d = m;
        } else {
            let m = d.mediant(&left)?;
            right = Some(d);
            d = m;
        }
    }
    Ok(FareyPlan { edge: *e, fractions })
}

/// Lattice-point-free parallelogram whose longer diagonal is `edge`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FareyParallelogram<T = i64> {
    pub edge: EdgeInstance<T>,
    /// Boundary of higher Farey order, anchored at `edge.origin`.
    pub boundary_long: EdgeInstance<T>,
    /// `edge - boundary_long`, anchored at `edge.origin`.
    pub boundary_short: EdgeInstance<T>,
    /// Segment from `origin + short` to `origin + long`.
    pub short_diagonal: Segment<T>,
    /// `origin, origin + long, origin + edge, origin + short`, anticlockwise or clockwise.
    pub vertices: [LatticePoint<T>; 4],
}

impl<T: Coord> FareyParallelogram<T> {
    pub fn long_diagonal(&self) -> Segment<T> {
        self.edge.segment()
    }
}

/// Farey parallelogram of a non-unit edge instance.
pub fn farey_parallelogram<T: Coord>(e: &EdgeInstance<T>) -> Result<FareyParallelogram<T>> {
    let class = e.class;
    if class.is_unit() {
        return Err(Error::InvalidEdgeClass {
            x: class.x.to_i64().unwrap_or(i64::MAX),
            y: class.y.to_i64().unwrap_or(i64::MAX),
            reason: "unit edges have no Farey parallelogram",
        });
    }
    let (zero, one) = (T::zero(), T::one());
    let (long, short) = if class.x == one && class.y == one {
        (EdgeClass { x: one, y: zero, sector: class.sector }, EdgeClass { x: zero, y: one, sector: class.sector })
    } else {
        let plan = farey_plan(&class)?;
        let prev = plan.fractions[plan.len() - 2];
        let long = farey_flip_inverse(&prev, &class);
        (long, EdgeClass { x: class.x - long.x, y: class.y - long.y, sector: class.sector })
    };
    let o = e.origin;
    let v1 = long.vector();
    let v2 = short.vector();
    let p1 = o.checked_offset(&v1).ok_or_else(|| Error::Overflow(format!("{e}")))?;
    let p2 = o.checked_offset(&v2).ok_or_else(|| Error::Overflow(format!("{e}")))?;
    let pe = o.checked_offset(&e.vector()).ok_or_else(|| Error::Overflow(format!("{e}")))?;
    Ok(FareyParallelogram {
        edge: *e,
        boundary_long: EdgeInstance::new(o, long),
        boundary_short: EdgeInstance::new(o, short),
        short_diagonal: Segment::new(p2, p1),
        vertices: [o, p1, pe, p2],
    })
}

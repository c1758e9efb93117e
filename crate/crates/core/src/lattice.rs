//! Points, vectors and edges of the triangular lattice.
//!
//! Coordinates are integer coefficients over the basis `u = (1,0)` and
//! `v = (0,1)`, where `u` and `v` meet at 60 degrees. The third unit
//! direction is `w = u - v`. All predicates are exact integer arithmetic;
//! the Cartesian embedding is only used for lengths and rendering.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{Float, PrimInt, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer scalar usable as a lattice coordinate.
pub trait Coord:
    PrimInt + Signed + Integer + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Coord for T where
    T: PrimInt + Signed + Integer + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

/// Largest absolute coordinate accepted at API boundaries for `i64` data.
/// Keeps every cross product of coordinate differences inside `i64`.
pub const COORD_LIMIT: i64 = 1 << 30;

/// Displacement `a*u + b*v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticeVector<T = i64> {
    pub a: T,
    pub b: T,
}

/// Lattice point with coordinates over the same basis as [`LatticeVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint<T = i64> {
    pub a: T,
    pub b: T,
}

impl<T: Coord> LatticeVector<T> {
    pub fn new(a: T, b: T) -> Self {
        LatticeVector { a, b }
    }

    pub fn zero() -> Self {
        LatticeVector { a: T::zero(), b: T::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `a^2 + ab + b^2`.
    pub fn squared_length(&self) -> T {
        self.a * self.a + self.a * self.b + self.b * self.b
    }

    pub fn checked_squared_length(&self) -> Option<T> {
        let aa = self.a.checked_mul(&self.a)?;
        let ab = self.a.checked_mul(&self.b)?;
        let bb = self.b.checked_mul(&self.b)?;
        aa.checked_add(&ab)?.checked_add(&bb)
    }

    pub fn is_unit(&self) -> bool {
        self.squared_length() == T::one()
    }

    /// True when the coordinates are coprime.
    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.a.gcd(&self.b) == T::one()
    }

    /// Integer cross product; its sign is the orientation of the pair.
    pub fn cross(&self, other: &Self) -> T {
        self.a * other.b - self.b * other.a
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(LatticeVector { a: self.a.checked_add(&other.a)?, b: self.b.checked_add(&other.b)? })
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(LatticeVector { a: self.a.checked_sub(&other.a)?, b: self.b.checked_sub(&other.b)? })
    }

    pub fn checked_scale(&self, k: T) -> Option<Self> {
        Some(LatticeVector { a: self.a.checked_mul(&k)?, b: self.b.checked_mul(&k)? })
    }

    pub fn to_cartesian<F: Float>(&self) -> (F, F) {
        cartesian(self.a, self.b)
    }

    pub fn euclidean_length<F: Float>(&self) -> F {
        let (x, y) = self.to_cartesian::<F>();
        (x * x + y * y).sqrt()
    }
}

impl<T: Coord> LatticePoint<T> {
    pub fn new(a: T, b: T) -> Self {
        LatticePoint { a, b }
    }

    pub fn origin() -> Self {
        LatticePoint { a: T::zero(), b: T::zero() }
    }

    pub fn to_vector(self) -> LatticeVector<T> {
        LatticeVector { a: self.a, b: self.b }
    }

    pub fn checked_offset(&self, v: &LatticeVector<T>) -> Option<Self> {
        Some(LatticePoint { a: self.a.checked_add(&v.a)?, b: self.b.checked_add(&v.b)? })
    }

    pub fn to_cartesian<F: Float>(&self) -> (F, F) {
        cartesian(self.a, self.b)
    }
}

fn cartesian<T: Coord, F: Float>(a: T, b: T) -> (F, F) {
    let a = F::from(a).expect("coordinate representable as float");
    let b = F::from(b).expect("coordinate representable as float");
    let half = F::from(0.5).unwrap();
    let h = F::from(3.0).unwrap().sqrt() * half;
    (a + b * half, b * h)
}

impl<T: Coord> Add for LatticeVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        LatticeVector { a: self.a + o.a, b: self.b + o.b }
    }
}

impl<T: Coord> Sub for LatticeVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        LatticeVector { a: self.a - o.a, b: self.b - o.b }
    }
}

impl<T: Coord> Neg for LatticeVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        LatticeVector { a: -self.a, b: -self.b }
    }
}

impl<T: Coord> Mul<T> for LatticeVector<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        LatticeVector { a: self.a * k, b: self.b * k }
    }
}

impl<T: Coord> Add<LatticeVector<T>> for LatticePoint<T> {
    type Output = Self;
    fn add(self, v: LatticeVector<T>) -> Self {
        LatticePoint { a: self.a + v.a, b: self.b + v.b }
    }
}

impl<T: Coord> Sub<LatticeVector<T>> for LatticePoint<T> {
    type Output = Self;
    fn sub(self, v: LatticeVector<T>) -> Self {
        LatticePoint { a: self.a - v.a, b: self.b - v.b }
    }
}

impl<T: Coord> Sub for LatticePoint<T> {
    type Output = LatticeVector<T>;
    fn sub(self, o: Self) -> LatticeVector<T> {
        LatticeVector { a: self.a - o.a, b: self.b - o.b }
    }
}

impl<T: fmt::Display> fmt::Display for LatticeVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{}>", self.a, self.b)
    }
}

impl<T: fmt::Display> fmt::Display for LatticePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Sign of the turn `p -> q -> r`: `1` anticlockwise, `-1` clockwise, `0` collinear.
pub fn orientation<T: Coord>(p: LatticePoint<T>, q: LatticePoint<T>, r: LatticePoint<T>) -> i8 {
    let c = (q - p).cross(&(r - p));
    if c > T::zero() {
        1
    } else if c < T::zero() {
        -1
    } else {
        0
    }
}

/// One of the three 60-degree sectors of the upper half plane.
///
/// Each sector is spanned by two consecutive unit directions in
/// anticlockwise order: `(u, v)`, `(v, -w)`, `(-w, -u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sector {
    S0,
    S1,
    S2,
}

impl Sector {
    pub const ALL: [Sector; 3] = [Sector::S0, Sector::S1, Sector::S2];

    pub fn index(self) -> u8 {
        match self {
            Sector::S0 => 0,
            Sector::S1 => 1,
            Sector::S2 => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Sector> {
        match i {
            0 => Some(Sector::S0),
            1 => Some(Sector::S1),
            2 => Some(Sector::S2),
            _ => None,
        }
    }

    /// The pair of unit vectors spanning the sector, in anticlockwise order.
    pub fn basis<T: Coord>(self) -> (LatticeVector<T>, LatticeVector<T>) {
        let (z, o) = (T::zero(), T::one());
        match self {
            Sector::S0 => (LatticeVector::new(o, z), LatticeVector::new(z, o)),
            Sector::S1 => (LatticeVector::new(z, o), LatticeVector::new(-o, o)),
            Sector::S2 => (LatticeVector::new(-o, o), LatticeVector::new(-o, z)),
        }
    }

    /// `x * first + y * second`.
    pub fn combine<T: Coord>(self, x: T, y: T) -> LatticeVector<T> {
        let (f, s) = self.basis::<T>();
        f * x + s * y
    }
}

/// Primitive lattice direction up to sign, as coprime non-negative
/// coefficients `(x, y)` over the spanning pair of a sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeClass<T = i64> {
    pub x: T,
    pub y: T,
    pub sector: Sector,
}

impl<T: Coord> EdgeClass<T> {
    pub fn new(x: T, y: T, sector: Sector) -> Result<Self> {
        let (xi, yi) = (x.to_i64().unwrap_or(i64::MAX), y.to_i64().unwrap_or(i64::MAX));
        if x < T::zero() || y < T::zero() {
            return Err(Error::InvalidEdgeClass { x: xi, y: yi, reason: "negative coefficient" });
        }
        if x.is_zero() && y.is_zero() {
            return Err(Error::InvalidEdgeClass { x: xi, y: yi, reason: "zero vector" });
        }
        if x.gcd(&y) != T::one() {
            return Err(Error::InvalidEdgeClass { x: xi, y: yi, reason: "coefficients not coprime" });
        }
        Ok(EdgeClass { x, y, sector })
    }

    /// Lattice vector `x * first + y * second`.
    pub fn vector(&self) -> LatticeVector<T> {
        self.sector.combine(self.x, self.y)
    }

    pub fn squared_length(&self) -> T {
        self.vector().squared_length()
    }

    pub fn is_unit(&self) -> bool {
        (self.x.is_zero() && self.y == T::one()) || (self.y.is_zero() && self.x == T::one())
    }
}

impl<T: fmt::Display> fmt::Display for EdgeClass<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sector {
            Sector::S0 => 0,
            Sector::S1 => 1,
            Sector::S2 => 2,
        };
        write!(f, "({},{})s{}", self.x, self.y, s)
    }
}

/// Canonical class of a primitive vector.
///
/// The vector is first mapped into the half plane `b > 0 or (b = 0, a > 0)`,
/// then assigned to the half-open sector `[0, 60)`, `[60, 120)` or
/// `[120, 180)` degrees containing it. Unit directions therefore always
/// canonicalize to `(1, 0)`.
pub fn canonical_edge_class<T: Coord>(v: LatticeVector<T>) -> Result<EdgeClass<T>> {
    if !v.is_primitive() {
        return Err(Error::NotPrimitive((v.a.to_i64().unwrap_or(i64::MAX), v.b.to_i64().unwrap_or(i64::MAX))));
    }
    let z = T::zero();
    let v = if v.b > z || (v.b == z && v.a > z) { v } else { -v };
    let (a, b) = (v.a, v.b);
    let (x, y, sector) = if a > z {
        (a, b, Sector::S0)
    } else if a + b > z {
        (a + b, -a, Sector::S1)
    } else {
        (b, -a - b, Sector::S2)
    };
    Ok(EdgeClass { x, y, sector })
}

/// Segment with unordered endpoints, stored with `p < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Segment<T = i64> {
    pub p: LatticePoint<T>,
    pub q: LatticePoint<T>,
}

impl<T: Coord> Segment<T> {
    pub fn new(p: LatticePoint<T>, q: LatticePoint<T>) -> Self {
        if p <= q {
            Segment { p, q }
        } else {
            Segment { p: q, q: p }
        }
    }

    pub fn vector(&self) -> LatticeVector<T> {
        self.q - self.p
    }

    pub fn squared_length(&self) -> T {
        self.vector().squared_length()
    }

    pub fn is_unit(&self) -> bool {
        self.vector().is_unit()
    }

    pub fn is_primitive(&self) -> bool {
        self.vector().is_primitive()
    }

    pub fn has_endpoint(&self, x: LatticePoint<T>) -> bool {
        self.p == x || self.q == x
    }

    pub fn euclidean_length<F: Float>(&self) -> F {
        self.vector().euclidean_length()
    }

    pub fn translate(&self, v: LatticeVector<T>) -> Self {
        Segment::new(self.p + v, self.q + v)
    }
}

impl<T: fmt::Display> fmt::Display for Segment<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", self.p, self.q)
    }
}

/// Edge anchored at `origin`, pointing along its class vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeInstance<T = i64> {
    pub origin: LatticePoint<T>,
    pub class: EdgeClass<T>,
}

impl<T: Coord> EdgeInstance<T> {
    pub fn new(origin: LatticePoint<T>, class: EdgeClass<T>) -> Self {
        EdgeInstance { origin, class }
    }

    /// Canonical instance covering the segment `p q`.
    pub fn from_points(p: LatticePoint<T>, q: LatticePoint<T>) -> Result<Self> {
        let v = q - p;
        let class = canonical_edge_class(v)?;
        let origin = if class.vector() == v { p } else { q };
        Ok(EdgeInstance { origin, class })
    }

    pub fn from_segment(s: &Segment<T>) -> Result<Self> {
        Self::from_points(s.p, s.q)
    }

    pub fn vector(&self) -> LatticeVector<T> {
        self.class.vector()
    }

    pub fn endpoint(&self) -> LatticePoint<T> {
        self.origin + self.vector()
    }

    pub fn segment(&self) -> Segment<T> {
        Segment::new(self.origin, self.endpoint())
    }
}

impl<T: fmt::Display> fmt::Display for EdgeInstance<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.class, self.origin)
    }
}

/// True when the two segments share a point that is not a lattice point.
///
/// Covers proper crossings and collinear overlaps; touching at a lattice
/// point (shared endpoint, T-junction) does not count.
pub fn segments_intersect<T: Coord>(s: &Segment<T>, t: &Segment<T>) -> bool {
    let o1 = orientation(s.p, s.q, t.p);
    let o2 = orientation(s.p, s.q, t.q);
    let o3 = orientation(t.p, t.q, s.p);
    let o4 = orientation(t.p, t.q, s.q);
    if o1 == 0 && o2 == 0 {
        return collinear_overlap(s, t);
    }
    if o1 * o2 < 0 && o3 * o4 < 0 {
        // Proper crossing; reject when the crossing point is a lattice point.
        let d1 = s.vector();
        let d2 = t.vector();
        let den = d1.cross(&d2);
        let num = (t.p - s.p).cross(&d2);
        let (na, nb) = (num * d1.a, num * d1.b);
        let lattice = (na % den).is_zero() && (nb % den).is_zero();
        return !lattice;
    }
    false
}

fn collinear_overlap<T: Coord>(s: &Segment<T>, t: &Segment<T>) -> bool {
    // Project onto the dominant axis of s; overlap must have positive length.
    let d = s.vector();
    let key = |p: LatticePoint<T>| if d.a != T::zero() { p.a } else { p.b };
    let (s0, s1) = minmax(key(s.p), key(s.q));
    let (t0, t1) = minmax(key(t.p), key(t.q));
    let lo = if s0 > t0 { s0 } else { t0 };
    let hi = if s1 < t1 { s1 } else { t1 };
    lo < hi
}

fn minmax<T: Ord>(x: T, y: T) -> (T, T) {
    if x <= y {
        (x, y)
    } else {
        (y, x)
    }
}

/// True when `x` lies on the closed segment.
pub fn on_segment<T: Coord>(s: &Segment<T>, x: LatticePoint<T>) -> bool {
    orientation(s.p, s.q, x) == 0
        && minmax(s.p.a, s.q.a).0 <= x.a
        && x.a <= minmax(s.p.a, s.q.a).1
        && minmax(s.p.b, s.q.b).0 <= x.b
        && x.b <= minmax(s.p.b, s.q.b).1
}

/// Position of a point relative to a closed polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Locates `x` relative to the simple polygon with vertex ring `ring`.
pub fn locate<T: Coord>(ring: &[LatticePoint<T>], x: LatticePoint<T>) -> Location {
    let n = ring.len();
    let mut winding = 0i64;
    for i in 0..n {
        let p = ring[i];
        let q = ring[(i + 1) % n];
        if on_segment(&Segment::new(p, q), x) {
            return Location::Boundary;
        }
        if p.b <= x.b {
            if q.b > x.b && orientation(p, q, x) > 0 {
                winding += 1;
            }
        } else if q.b <= x.b && orientation(p, q, x) < 0 {
            winding -= 1;
        }
    }
    if winding != 0 {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Lattice points strictly inside the polygon `ring`.
pub fn interior_lattice_points<T: Coord>(ring: &[LatticePoint<T>]) -> BTreeSet<LatticePoint<T>> {
    let mut out = BTreeSet::new();
    if ring.len() < 3 {
        return out;
    }
    let (mut amin, mut amax, mut bmin, mut bmax) = (ring[0].a, ring[0].a, ring[0].b, ring[0].b);
    for p in ring {
        amin = amin.min(p.a);
        amax = amax.max(p.a);
        bmin = bmin.min(p.b);
        bmax = bmax.max(p.b);
    }
    let mut a = amin;
    while a <= amax {
        let mut b = bmin;
        while b <= bmax {
            let x = LatticePoint::new(a, b);
            if locate(ring, x) == Location::Inside {
                out.insert(x);
            }
            b = b + T::one();
        }
        a = a + T::one();
    }
    out
}

/// True when the closed segment lies in the closed polygon.
pub fn segment_in_polygon<T: Coord>(ring: &[LatticePoint<T>], s: &Segment<T>) -> bool {
    let n = ring.len();
    for i in 0..n {
        let side = Segment::new(ring[i], ring[(i + 1) % n]);
        let o1 = orientation(side.p, side.q, s.p);
        let o2 = orientation(side.p, side.q, s.q);
        let o3 = orientation(s.p, s.q, side.p);
        let o4 = orientation(s.p, s.q, side.q);
        if o1 * o2 < 0 && o3 * o4 < 0 {
            return false;
        }
    }
    if locate(ring, s.p) == Location::Outside || locate(ring, s.q) == Location::Outside {
        return false;
    }
    // Any polygon vertex strictly inside the segment splits it into pieces
    // that must each stay inside; testing every piece midpoint settles it.
    let two = T::one() + T::one();
    let scaled: Vec<LatticePoint<T>> = ring.iter().map(|p| LatticePoint::new(p.a * two, p.b * two)).collect();
    let mut cuts = vec![s.p, s.q];
    for &v in ring {
        if v != s.p && v != s.q && on_segment(s, v) {
            cuts.push(v);
        }
    }
    cuts.sort();
    cuts.windows(2).all(|w| {
        let m = LatticePoint::new(w[0].a + w[1].a, w[0].b + w[1].b);
        locate(&scaled, m) != Location::Outside
    })
}

/// True when the open interiors of two convex polygons are disjoint.
///
/// Either argument may be degenerate (a segment or a point); degenerate
/// shapes have empty interior relative to the plane but are treated as
/// their relative interior, so a segment lying along a side is disjoint
/// from the interior.
pub fn convex_interiors_disjoint<T: Coord>(a: &[LatticePoint<T>], b: &[LatticePoint<T>]) -> bool {
    separated_by_edge_of(a, b) || separated_by_edge_of(b, a)
}

fn separated_by_edge_of<T: Coord>(a: &[LatticePoint<T>], b: &[LatticePoint<T>]) -> bool {
    let n = a.len();
    for i in 0..n {
        let p = a[i];
        let q = a[(i + 1) % n];
        if p == q {
            continue;
        }
        let side = |pts: &[LatticePoint<T>]| {
            let mut pos = false;
            let mut neg = false;
            for &x in pts {
                match orientation(p, q, x) {
                    1 => pos = true,
                    -1 => neg = true,
                    _ => {}
                }
            }
            (pos, neg)
        };
        let (apos, aneg) = side(a);
        let (bpos, bneg) = side(b);
        if (!apos && !bneg) || (!aneg && !bpos) {
            return true;
        }
    }
    false
}

/// Twice the signed area of a vertex ring.
pub fn doubled_area<T: Coord>(ring: &[LatticePoint<T>]) -> T {
    let n = ring.len();
    let mut s = T::zero();
    for i in 0..n {
        s = s + ring[i].to_vector().cross(&ring[(i + 1) % n].to_vector());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64, b: i64) -> LatticePoint {
        LatticePoint::new(a, b)
    }

    #[test]
    fn squared_lengths() {
        assert_eq!(LatticeVector::new(3i64, 2).squared_length(), 19);
        assert_eq!(LatticeVector::new(1i64, -1).squared_length(), 1);
        assert_eq!(LatticeVector::new(1i64, 1).squared_length(), 3);
        assert_eq!(LatticeVector::new(1i32, -1).squared_length(), 1);
    }

    #[test]
    fn orientation_signs() {
        assert_eq!(orientation(pt(0, 0), pt(1, 0), pt(0, 1)), 1);
        assert_eq!(orientation(pt(0, 0), pt(1, 0), pt(2, 0)), 0);
        assert_eq!(orientation(pt(0, 0), pt(0, 1), pt(1, 0)), -1);
    }

    #[test]
    fn unit_directions_canonicalize_to_one_zero() {
        for v in [(1, 0), (0, 1), (1, -1), (-1, 0), (0, -1), (-1, 1)] {
            let c = canonical_edge_class(LatticeVector::new(v.0, v.1)).unwrap();
            assert_eq!((c.x, c.y), (1, 0), "{v:?}");
        }
    }

    #[test]
    fn sector_examples() {
        let c = canonical_edge_class(LatticeVector::new(3i64, 2)).unwrap();
        assert_eq!(c, EdgeClass { x: 3, y: 2, sector: Sector::S0 });
        let c = canonical_edge_class(LatticeVector::new(-1i64, 3)).unwrap();
        assert_eq!(c, EdgeClass { x: 2, y: 1, sector: Sector::S1 });
        assert!(canonical_edge_class(LatticeVector::new(2i64, 2)).is_err());
    }

    #[test]
    fn interior_points_of_triangles() {
        assert!(interior_lattice_points(&[pt(0, 0), pt(1, 0), pt(0, 1)]).is_empty());
        assert_eq!(interior_lattice_points(&[pt(0, 0), pt(3, 0), pt(0, 3)]), [pt(1, 1)].into_iter().collect());
        assert!(interior_lattice_points(&[pt(0, 0), pt(1, 1), pt(3, 2), pt(2, 1)]).is_empty());
    }

    #[test]
    fn crossing_at_lattice_point_is_not_an_intersection() {
        let s = Segment::new(pt(0, 0), pt(2, 2));
        let t = Segment::new(pt(0, 2), pt(2, 0));
        assert!(!segments_intersect(&s, &t));
        let s = Segment::new(pt(0, 0), pt(1, 1));
        let t = Segment::new(pt(1, 0), pt(0, 1));
        assert!(segments_intersect(&s, &t));
        let s = Segment::new(pt(0, 0), pt(2, 0));
        let t = Segment::new(pt(1, 0), pt(3, 0));
        assert!(segments_intersect(&s, &t));
        let t = Segment::new(pt(2, 0), pt(3, 0));
        assert!(!segments_intersect(&s, &t));
    }
}

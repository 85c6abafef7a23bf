//! Exact integer and rational geometry on the lattice `Z^d`.
//!
//! Everything here is exact: points and normals are arbitrary-precision
//! integer vectors, displacements are reduced rationals, and distances are
//! only ever handled squared or as integer offset gaps, so no irrational
//! number is ever represented. Degenerate inputs (zero normals, affinely
//! dependent point sets, dimension mismatches) are hard errors, never
//! silent defaults.

pub mod fm;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Index;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Reduced rational with positive denominator (maintained by the type).
pub type Rat = num_rational::BigRational;

/// Errors raised by the geometry layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// Every slope coefficient of a hyperplane equation was zero.
    AllSlopesZero,
    /// An operation required a nonzero vector.
    ZeroVector,
    /// The points of a basic set do not span a hyperplane.
    AffinelyDependent,
    /// Operands have different ambient dimensions.
    DimMismatch,
    /// The hyperplane was required to pass through a lattice point.
    NonIntegralOffset,
    /// The normal vector was required to have coordinate gcd 1.
    NotPrimitive,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::AllSlopesZero => write!(f, "all slope coefficients are zero"),
            LatticeError::ZeroVector => write!(f, "zero vector"),
            LatticeError::AffinelyDependent => write!(f, "points are affinely dependent"),
            LatticeError::DimMismatch => write!(f, "dimension mismatch"),
            LatticeError::NonIntegralOffset => write!(f, "hyperplane offset is not an integer"),
            LatticeError::NotPrimitive => write!(f, "normal vector is not primitive"),
        }
    }
}

/// A point of `Z^d` or an integer normal vector. Always has dimension >= 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntVec {
    coords: Vec<Int>,
}

impl IntVec {
    pub fn new(coords: Vec<Int>) -> Self {
        assert!(!coords.is_empty(), "IntVec must have dimension >= 1");
        IntVec { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        IntVec::new(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &IntVec) -> Int {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn sub(&self, other: &IntVec) -> IntVec {
        assert_eq!(self.dim(), other.dim());
        IntVec::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> IntVec {
        IntVec::new(self.coords.iter().map(|c| -c).collect())
    }

    pub fn norm_sq(&self) -> Int {
        self.coords.iter().map(|c| c * c).sum()
    }

    /// Compact display form `(a,b,...)`, used in identity strings.
    pub fn display(&self) -> String {
        use core::fmt::Write;
        let mut s = String::from("(");
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", c);
        }
        s.push(')');
        s
    }
}

impl Index<usize> for IntVec {
    type Output = Int;
    fn index(&self, i: usize) -> &Int {
        &self.coords[i]
    }
}

impl fmt::Debug for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Gcd of the absolute coordinate values; 0 only for the zero vector.
pub fn gcd_vec(v: &IntVec) -> Int {
    v.coords()
        .iter()
        .fold(Int::zero(), |acc, c| acc.gcd(c))
}

/// Integer coefficients `y` with `v · y = gcd_vec(v)`, by iterated Bezout.
pub fn bezout_vec(v: &IntVec) -> Result<IntVec, LatticeError> {
    if v.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    let mut coeffs: Vec<Int> = Vec::with_capacity(v.dim());
    let mut g = Int::zero();
    for c in v.coords() {
        let e = g.extended_gcd(c);
        for y in coeffs.iter_mut() {
            *y *= &e.x;
        }
        coeffs.push(e.y);
        g = e.gcd;
    }
    debug_assert_eq!(v.dot(&IntVec::new(coeffs.clone())), g);
    Ok(IntVec::new(coeffs))
}

/// An unoriented hyperplane `normal · x + offset = 0` in integral reduced
/// form: primitive integer normal, first nonzero coordinate positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    normal: IntVec,
    offset: Rat,
}

impl Hyperplane {
    pub fn normal(&self) -> &IntVec {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Signed evaluation `normal · p + offset`.
    pub fn eval(&self, p: &IntVec) -> Result<Rat, LatticeError> {
        if p.dim() != self.dim() {
            return Err(LatticeError::DimMismatch);
        }
        Ok(Rat::from_integer(self.normal.dot(p)) + &self.offset)
    }

    pub fn contains(&self, p: &IntVec) -> Result<bool, LatticeError> {
        Ok(self.eval(p)?.is_zero())
    }
}

/// Puts `sum slopes_i x_i + displacement = 0` into integral reduced form:
/// primitive integer slopes, same solution set, first nonzero slope
/// positive.
pub fn reduce_hyperplane(slopes: &[Rat], displacement: &Rat) -> Result<Hyperplane, LatticeError> {
    let (ints, offset) = clear_denominators(slopes, displacement)?;
    Ok(sign_normalize(ints, offset))
}

/// Common scaling step: multiply by the lcm of slope denominators, divide
/// by the gcd of the resulting integers. Returns the primitive integer
/// slopes and the rescaled displacement. The scale factor is positive, so
/// inequality orientation is preserved.
fn clear_denominators(slopes: &[Rat], displacement: &Rat) -> Result<(Vec<Int>, Rat), LatticeError> {
    if slopes.is_empty() || slopes.iter().all(Zero::is_zero) {
        return Err(LatticeError::AllSlopesZero);
    }
    let lcm = slopes
        .iter()
        .fold(Int::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<Int> = slopes
        .iter()
        .map(|r| r.numer() * (&lcm / r.denom()))
        .collect();
    let gcd = ints.iter().fold(Int::zero(), |acc, c| acc.gcd(c));
    let ints: Vec<Int> = ints.iter().map(|c| c / &gcd).collect();
    let offset = displacement * Rat::new(lcm, gcd);
    Ok((ints, offset))
}

fn sign_normalize(mut ints: Vec<Int>, mut offset: Rat) -> Hyperplane {
    let flip = ints
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| c.is_negative())
        .unwrap_or(false);
    if flip {
        for c in ints.iter_mut() {
            *c = -&*c;
        }
        offset = -offset;
    }
    Hyperplane {
        normal: IntVec::new(ints),
        offset,
    }
}

/// `d` affine-independent lattice points spanning a hyperplane. Points are
/// stored sorted, so equal sets compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasicSet {
    points: Vec<IntVec>,
}

impl BasicSet {
    pub fn new(mut points: Vec<IntVec>) -> Result<Self, LatticeError> {
        let Some(first) = points.first() else {
            return Err(LatticeError::AffinelyDependent);
        };
        let dim = first.dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(LatticeError::DimMismatch);
        }
        if points.len() != dim {
            return Err(LatticeError::AffinelyDependent);
        }
        points.sort();
        if normal_through(&points).is_none() {
            return Err(LatticeError::AffinelyDependent);
        }
        Ok(BasicSet { points })
    }

    pub fn from_i64s(points: &[&[i64]]) -> Result<Self, LatticeError> {
        BasicSet::new(points.iter().map(|p| IntVec::from_i64s(p)).collect())
    }

    pub fn points(&self) -> &[IntVec] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }
}

/// Integer normal (not yet primitive) orthogonal to the affine span of the
/// points via cofactor expansion of the difference matrix; `None` when the
/// points are affinely dependent.
fn normal_through(points: &[IntVec]) -> Option<IntVec> {
    let d = points[0].dim();
    let diffs: Vec<&IntVec> = points[1..].iter().collect();
    let base = &points[0];
    // rows: p_i - p_0, one per i; (d-1) x d matrix
    let rows: Vec<Vec<Int>> = diffs
        .iter()
        .map(|p| (0..d).map(|k| &p[k] - &base[k]).collect())
        .collect();
    let mut normal = Vec::with_capacity(d);
    for j in 0..d {
        let minor: Vec<Vec<Int>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let det = int_det(minor);
        normal.push(if j % 2 == 0 { det } else { -det });
    }
    let n = IntVec::new(normal);
    if n.is_zero() {
        None
    } else {
        Some(n)
    }
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
fn int_det(mut m: Vec<Vec<Int>>) -> Int {
    let n = m.len();
    if n == 0 {
        return Int::one();
    }
    let mut sign = false;
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Int::zero();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = Int::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// The unique hyperplane through the points of a basic set, in integral
/// reduced form. The offset is always an integer because the plane passes
/// through lattice points and the normal is primitive.
pub fn hyperplane_through(b: &BasicSet) -> Result<Hyperplane, LatticeError> {
    let n = normal_through(b.points()).ok_or(LatticeError::AffinelyDependent)?;
    let g = gcd_vec(&n);
    let primitive = IntVec::new(n.coords().iter().map(|c| c / &g).collect());
    let offset = Rat::from_integer(-primitive.dot(&b.points()[0]));
    let h = sign_normalize(primitive.coords().to_vec(), offset);
    debug_assert!(b
        .points()
        .iter()
        .all(|p| h.contains(p).unwrap_or(false)));
    Ok(h)
}

/// Smallest distance along axis `axis` (0-based) from a lattice point off
/// `h` to `h`: `1/|a_axis|`, or `None` when that axis coordinate of the
/// normal is zero and the distance is undefined.
///
/// Requires `h` to pass through a lattice point (integer offset).
pub fn min_j_distance(h: &Hyperplane, axis: usize) -> Result<Option<Rat>, LatticeError> {
    if !h.offset().is_integer() {
        return Err(LatticeError::NonIntegralOffset);
    }
    assert!(axis < h.dim(), "axis out of range");
    let a = &h.normal()[axis];
    if a.is_zero() {
        return Ok(None);
    }
    Ok(Some(Rat::new(Int::one(), a.abs())))
}

/// Squared distance between closest distinct parallel lattice hyperplanes
/// with the given primitive normal: `1 / (sum a_k^2)`.
pub fn min_parallel_distance_sq(normal: &IntVec) -> Result<Rat, LatticeError> {
    if !gcd_vec(normal).is_one() {
        return Err(LatticeError::NotPrimitive);
    }
    Ok(Rat::new(Int::one(), normal.norm_sq()))
}

/// An oriented half-space `{ p : normal · p + floor_offset >= 0 }` with
/// primitive normal: the canonical representative of its language. Two
/// half-spaces denote the same set of lattice points iff their fields are
/// identical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfSpace {
    normal: IntVec,
    floor_offset: Int,
}

impl HalfSpace {
    pub fn new(normal: IntVec, floor_offset: Int) -> Result<Self, LatticeError> {
        if !gcd_vec(&normal).is_one() {
            return Err(LatticeError::NotPrimitive);
        }
        Ok(HalfSpace {
            normal,
            floor_offset,
        })
    }

    /// Canonicalizes `{ x : sum coeffs_i x_i + offset >= 0 }` over rational
    /// coefficients: positive rescaling to a primitive integer normal, then
    /// the displacement floored (lattice membership is unchanged by the
    /// floor since the left-hand sum is an integer).
    pub fn from_inequality(coeffs: &[Rat], offset: &Rat) -> Result<Self, LatticeError> {
        let (ints, offset) = clear_denominators(coeffs, offset)?;
        Ok(HalfSpace {
            normal: IntVec::new(ints),
            floor_offset: offset.floor().to_integer(),
        })
    }

    /// The placeholder half-space `x_d >= 0` used while no informative
    /// hypothesis exists.
    pub fn dummy(dim: usize) -> Self {
        let mut coords = alloc::vec![Int::zero(); dim];
        coords[dim - 1] = Int::one();
        HalfSpace {
            normal: IntVec::new(coords),
            floor_offset: Int::zero(),
        }
    }

    pub fn normal(&self) -> &IntVec {
        &self.normal
    }

    pub fn floor_offset(&self) -> &Int {
        &self.floor_offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Lattice membership: `normal · p + floor_offset >= 0`.
    pub fn member(&self, p: &IntVec) -> Result<bool, LatticeError> {
        if p.dim() != self.dim() {
            return Err(LatticeError::DimMismatch);
        }
        Ok(!(self.normal.dot(p) + &self.floor_offset).is_negative())
    }

    /// Language equality; an error on mismatched ambient dimensions.
    pub fn equal_language(&self, other: &HalfSpace) -> Result<bool, LatticeError> {
        if self.dim() != other.dim() {
            return Err(LatticeError::DimMismatch);
        }
        Ok(self == other)
    }

    /// Language inclusion. Differently oriented or differently sloped
    /// half-spaces disagree arbitrarily far out, so inclusion holds only
    /// for equal normals with a no-larger offset.
    pub fn subset_of(&self, other: &HalfSpace) -> Result<bool, LatticeError> {
        if self.dim() != other.dim() {
            return Err(LatticeError::DimMismatch);
        }
        Ok(self.normal == other.normal && self.floor_offset <= other.floor_offset)
    }
}

/// The two half-spaces whose boundaries are the lattice planes tightest
/// against a separating hyperplane, one per side. They partition `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentPair {
    pub plus: HalfSpace,
    pub minus: HalfSpace,
}

/// Positive and negative tangent half-spaces of `h`:
/// `plus = { a·x + floor(a0) >= 0 }` and
/// `minus = { -a·x - floor(a0) - 1 >= 0 }`.
pub fn tangents(h: &Hyperplane) -> TangentPair {
    let floor = h.offset().floor().to_integer();
    let plus = HalfSpace {
        normal: h.normal().clone(),
        floor_offset: floor.clone(),
    };
    let minus = HalfSpace {
        normal: h.normal().neg(),
        floor_offset: -floor - Int::one(),
    };
    TangentPair { plus, minus }
}

/// Whether two basic sets lie on parallel hyperplanes with some segment
/// orthogonal to them joining the two cells (convex hulls).
///
/// The segment condition is an exact feasibility question: convex weights
/// on each cell whose difference is a multiple of the common normal.
pub fn facing(b1: &BasicSet, b2: &BasicSet) -> Result<bool, LatticeError> {
    if b1.dim() != b2.dim() {
        return Err(LatticeError::DimMismatch);
    }
    let h1 = hyperplane_through(b1)?;
    let h2 = hyperplane_through(b2)?;
    if h1.normal() != h2.normal() {
        return Ok(false);
    }
    Ok(cells_face(b1, b2, h1.normal()))
}

fn cells_face(b1: &BasicSet, b2: &BasicSet, normal: &IntVec) -> bool {
    // Variables: lambda_1..lambda_d, mu_1..mu_d, t.
    let d = b1.dim();
    let vars = 2 * d + 1;
    let ri = |x: &Int| Rat::from_integer(x.clone());
    let mut cons: Vec<fm::Constraint> = Vec::new();
    for k in 0..d {
        let mut row = alloc::vec![Rat::zero(); vars];
        for (i, p) in b1.points().iter().enumerate() {
            row[i] = ri(&p[k]);
        }
        for (j, q) in b2.points().iter().enumerate() {
            row[d + j] = -ri(&q[k]);
        }
        row[2 * d] = -ri(&normal[k]);
        cons.push(fm::Constraint::eq(row, Rat::zero()));
    }
    let mut sum_l = alloc::vec![Rat::zero(); vars];
    let mut sum_m = alloc::vec![Rat::zero(); vars];
    for i in 0..d {
        sum_l[i] = Rat::one();
        sum_m[d + i] = Rat::one();
    }
    cons.push(fm::Constraint::eq(sum_l, Rat::one()));
    cons.push(fm::Constraint::eq(sum_m, Rat::one()));
    for i in 0..2 * d {
        let mut row = alloc::vec![Rat::zero(); vars];
        row[i] = Rat::one();
        cons.push(fm::Constraint::ge(row, Rat::zero()));
    }
    fm::feasible(vars, &cons)
}

/// Whether two basic sets face each other on distinct parallel lattice
/// hyperplanes as close as possible (integer offsets differing by one —
/// the minimal realizable parallel distance for a primitive normal).
pub fn adjacent(b1: &BasicSet, b2: &BasicSet) -> Result<bool, LatticeError> {
    if b1.dim() != b2.dim() {
        return Err(LatticeError::DimMismatch);
    }
    let h1 = hyperplane_through(b1)?;
    let h2 = hyperplane_through(b2)?;
    if h1.normal() != h2.normal() {
        return Ok(false);
    }
    let gap = (h1.offset() - h2.offset()).abs();
    if gap != Rat::one() {
        return Ok(false);
    }
    Ok(cells_face(b1, b2, h1.normal()))
}

/// All primitive integer vectors with coordinates in `[-bound, bound]`,
/// in lexicographic order; both orientations included.
pub fn primitive_normals_in_box(dim: usize, bound: i64) -> Vec<IntVec> {
    let mut out = Vec::new();
    let mut coords = alloc::vec![0i64; dim];
    fn rec(coords: &mut [i64], pos: usize, bound: i64, out: &mut Vec<IntVec>) {
        if pos == coords.len() {
            let g = coords.iter().fold(0i64, |acc, &c| acc.gcd(&c.abs()));
            if g == 1 {
                out.push(IntVec::from_i64s(coords));
            }
            return;
        }
        for v in -bound..=bound {
            coords[pos] = v;
            rec(coords, pos + 1, bound, out);
        }
    }
    rec(&mut coords, 0, bound, &mut out);
    out
}

/// Number of primitive integer vectors `a` in dimension `dim` with
/// `sum a_i^2 <= norm_sq_bound`; both orientations counted.
pub fn count_primitive_normals_within(dim: usize, norm_sq_bound: &Int) -> u64 {
    use num_integer::Roots;
    use num_traits::ToPrimitive;
    let bound = norm_sq_bound.to_i64().expect("bound within desk scale");
    if bound <= 0 {
        return 0;
    }
    let radius = bound.sqrt() + 1;
    let mut count = 0u64;
    let mut coords = alloc::vec![0i64; dim];
    fn rec(coords: &mut [i64], pos: usize, radius: i64, bound: i64, count: &mut u64) {
        if pos == coords.len() {
            let norm: i64 = coords.iter().map(|c| c * c).sum();
            if norm == 0 || norm > bound {
                return;
            }
            let g = coords.iter().fold(0i64, |acc, &c| acc.gcd(&c.abs()));
            if g == 1 {
                *count += 1;
            }
            return;
        }
        for v in -radius..=radius {
            coords[pos] = v;
            rec(coords, pos + 1, radius, bound, count);
        }
    }
    rec(&mut coords, 0, radius, bound, &mut count);
    count
}

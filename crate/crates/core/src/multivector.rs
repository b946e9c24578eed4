//! Dense multivectors of the Euclidean Clifford algebra over ℝᴺ.
//!
//! Coefficients are stored in a flat array of length 2ᴺ. Index `b` is the
//! bitmask of the basis blade e_{i₁}∧…∧e_{i_r} with i₁ < … < i_r, so bit `i`
//! set means the factor e_{i+1} is present and the grade of the blade is
//! `b.count_ones()`.
//!
//! Every product is produced by one kernel: the basis-blade geometric product
//! (bitmask XOR with a reordering sign, eᵢ² = 1) filtered by the grades of the
//! two factors and the result. The exterior product keeps terms of grade
//! r + s, the left contraction terms of grade s − r, the right contraction
//! terms of grade r − s and the scalar product only grade 0.
//!
//! Hestenes' "inner product" is deliberately absent: it is not positive
//! definite ((e₁∧e₂) •_H (e₁∧e₂) = −1) and needs grade exceptions. The
//! contractions below replace it.

use std::fmt;
use std::ops::{Add, AddAssign, BitXor, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{GeoError, Result};

/// Largest supported ambient dimension (4096 coefficients).
pub const MAX_DIM: usize = 12;

/// Default relative tolerance for coefficientwise equality.
pub const EQ_TOL: f64 = 1e-12;

#[inline]
pub fn grade_of(mask: usize) -> usize {
    mask.count_ones() as usize
}

/// Sign picked up when reordering the concatenation e_a e_b into canonical
/// order, counting transpositions. Euclidean metric: no extra factor from
/// repeated indices.
#[inline]
pub fn reorder_sign(a: usize, b: usize) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn reversion_sign(grade: usize) -> f64 {
    if (grade * grade.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Set of grades carrying a nonzero coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GradeSet(u16);

impl GradeSet {
    pub fn contains(&self, r: usize) -> bool {
        r < 16 && self.0 & (1 << r) != 0
    }

    pub fn insert(&mut self, r: usize) {
        self.0 |= 1 << r;
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: GradeSet) -> GradeSet {
        GradeSet(self.0 | other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..16).filter(move |r| self.contains(*r))
    }

    /// Single grade if the set has exactly one element.
    pub fn single(&self) -> Option<usize> {
        if self.0.count_ones() == 1 {
            Some(self.0.trailing_zeros() as usize)
        } else {
            None
        }
    }
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Multivector {
    dim: usize,
    coeffs: Vec<f64>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(GeoError::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

impl Multivector {
    /// Builds a multivector from 2ᴺ coefficients.
    pub fn new(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if coeffs.len() != 1 << dim {
            return Err(GeoError::CoefficientCount {
                expected: 1 << dim,
                got: coeffs.len(),
            });
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(GeoError::NonFinite(i));
        }
        Ok(Self { dim, coeffs })
    }

    /// The zero multivector. Panics if `dim` is outside 1..=12.
    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "unsupported dimension {dim}");
        Self {
            dim,
            coeffs: vec![0.0; 1 << dim],
        }
    }

    pub fn scalar(dim: usize, s: f64) -> Self {
        let mut m = Self::zero(dim);
        m.coeffs[0] = s;
        m
    }

    /// Coefficient `c` times the basis blade with bitmask `mask`.
    pub fn blade(dim: usize, mask: usize, c: f64) -> Self {
        let mut m = Self::zero(dim);
        assert!(mask < m.coeffs.len(), "blade mask out of range");
        m.coeffs[mask] = c;
        m
    }

    /// Basis vector e_{i+1} (zero-based `i`).
    pub fn basis_vector(dim: usize, i: usize) -> Self {
        Self::blade(dim, 1 << i, 1.0)
    }

    /// Grade-1 multivector with the given components; the dimension is the
    /// slice length.
    pub fn vector(components: &[f64]) -> Self {
        let mut m = Self::zero(components.len());
        for (i, c) in components.iter().enumerate() {
            m.coeffs[1 << i] = *c;
        }
        m
    }

    /// Unit pseudoscalar e₁∧…∧e_N.
    pub fn pseudoscalar(dim: usize) -> Self {
        Self::blade(dim, (1 << dim) - 1, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn get(&self, mask: usize) -> f64 {
        self.coeffs[mask]
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    /// Grade-1 components in basis order.
    pub fn vector_part(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.coeffs[1 << i]).collect()
    }

    pub fn grades(&self) -> GradeSet {
        self.grades_above(0.0)
    }

    /// Grades having a coefficient with magnitude above `tol`.
    pub fn grades_above(&self, tol: f64) -> GradeSet {
        let mut g = GradeSet::default();
        for (b, c) in self.coeffs.iter().enumerate() {
            if c.abs() > tol {
                g.insert(grade_of(b));
            }
        }
        g
    }

    /// ⟨A⟩_r. Grades above N give zero.
    pub fn grade(&self, r: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (b, c) in self.coeffs.iter().enumerate() {
            if grade_of(b) == r {
                out.coeffs[b] = *c;
            }
        }
        out
    }

    /// Checked ⟨A⟩_r.
    pub fn try_grade(&self, r: usize) -> Result<Self> {
        if r > self.dim {
            return Err(GeoError::GradeOutOfRange {
                grade: r,
                dim: self.dim,
            });
        }
        Ok(self.grade(r))
    }

    /// Reversion: (−1)^{r(r−1)/2} on grade r.
    pub fn reverse(&self) -> Self {
        self.map_by_grade(reversion_sign)
    }

    /// Grade involution: (−1)^r on grade r.
    pub fn involute(&self) -> Self {
        self.map_by_grade(|r| if r % 2 == 0 { 1.0 } else { -1.0 })
    }

    fn map_by_grade(&self, sign: impl Fn(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(b, c)| sign(grade_of(b)) * c)
            .collect();
        Self {
            dim: self.dim,
            coeffs,
        }
    }

    fn product_with(&self, rhs: &Self, keep: impl Fn(usize, usize, usize) -> bool) -> Self {
        assert_eq!(
            self.dim, rhs.dim,
            "multivector dimension mismatch in product"
        );
        let mut out = Self::zero(self.dim);
        for (a, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let ga = grade_of(a);
            for (b, &cb) in rhs.coeffs.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let r = a ^ b;
                if keep(ga, grade_of(b), grade_of(r)) {
                    out.coeffs[r] += reorder_sign(a, b) * ca * cb;
                }
            }
        }
        out
    }

    /// Geometric product AB. Panics on dimension mismatch; see
    /// [`geometric_product`] for the checked form.
    pub fn gp(&self, rhs: &Self) -> Self {
        self.product_with(rhs, |_, _, _| true)
    }

    /// Exterior product A∧B.
    pub fn wedge(&self, rhs: &Self) -> Self {
        self.product_with(rhs, |r, s, t| t == r + s)
    }

    /// Left contraction A⌟B: grade s − r part of ⟨A⟩_r⟨B⟩_s.
    pub fn lcontract(&self, rhs: &Self) -> Self {
        self.product_with(rhs, |r, s, t| s >= r && t == s - r)
    }

    /// Right contraction A⌞B: grade r − s part of ⟨A⟩_r⟨B⟩_s.
    pub fn rcontract(&self, rhs: &Self) -> Self {
        self.product_with(rhs, |r, s, t| r >= s && t == r - s)
    }

    /// Commutator product ½(AB − BA).
    pub fn commutator(&self, rhs: &Self) -> Self {
        (self.gp(rhs) - rhs.gp(self)) * 0.5
    }

    /// Scalar product A∗B = ⟨AB⟩₀.
    pub fn scalar_product(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        self.coeffs
            .iter()
            .zip(&rhs.coeffs)
            .enumerate()
            .map(|(b, (x, y))| reversion_sign(grade_of(b)) * x * y)
            .sum()
    }

    /// Inner product ⟨A,B⟩ = A∗Bᵗ; the Euclidean dot product of
    /// coefficient arrays.
    pub fn inner(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        self.coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(x, y)| x * y)
            .sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Hodge dual ★A = Aᵗ i.
    pub fn hodge(&self) -> Self {
        self.reverse().gp(&Self::pseudoscalar(self.dim))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// Largest coefficientwise relative difference
    /// |a−b| / max(1, |a|, |b|).
    pub fn rel_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "multivector dimension mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs() / 1f64.max(a.abs()).max(b.abs()))
            .fold(0.0, f64::max)
    }

    /// Coefficientwise equality |a−b| ≤ tol·max(1, |a|, |b|).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.rel_diff(other) <= tol
    }
}

fn check_same(a: &Multivector, b: &Multivector) -> Result<()> {
    if a.dim != b.dim {
        Err(GeoError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        })
    } else {
        Ok(())
    }
}

pub fn geometric_product(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    check_same(a, b)?;
    Ok(a.gp(b))
}

pub fn wedge(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    check_same(a, b)?;
    Ok(a.wedge(b))
}

pub fn contract_left(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    check_same(a, b)?;
    Ok(a.lcontract(b))
}

pub fn contract_right(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    check_same(a, b)?;
    Ok(a.rcontract(b))
}

pub fn commutator(a: &Multivector, b: &Multivector) -> Result<Multivector> {
    check_same(a, b)?;
    Ok(a.commutator(b))
}

pub fn scalar_product(a: &Multivector, b: &Multivector) -> Result<f64> {
    check_same(a, b)?;
    Ok(a.scalar_product(b))
}

pub fn inner_product(a: &Multivector, b: &Multivector) -> Result<f64> {
    check_same(a, b)?;
    Ok(a.inner(b))
}

pub fn grade_projection(a: &Multivector, r: usize) -> Result<Multivector> {
    a.try_grade(r)
}

pub fn pseudoscalar(dim: usize) -> Result<Multivector> {
    check_dim(dim)?;
    Ok(Multivector::pseudoscalar(dim))
}

/// Label of a basis blade, e.g. `e13` for mask 0b101.
pub fn blade_label(mask: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let mut s = String::from("e");
    for i in 0..usize::BITS as usize {
        if mask & (1 << i) != 0 {
            if i >= 9 {
                s.push('_');
            }
            s.push_str(&(i + 1).to_string());
        }
    }
    s
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[{}](", self.dim)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<usize> = (0..self.coeffs.len()).collect();
        order.sort_by_key(|b| (grade_of(*b), *b));
        let mut first = true;
        for b in order {
            let c = self.coeffs[b];
            if c == 0.0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            } else if c < 0.0 {
                write!(f, "-")?;
            }
            first = false;
            if b == 0 {
                write!(f, "{}", c.abs())?;
            } else {
                write!(f, "{}*{}", c.abs(), blade_label(b))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Multivector> for &Multivector {
            type Output = Multivector;
            fn $method(self, rhs: &Multivector) -> Multivector {
                let f: fn(&Multivector, &Multivector) -> Multivector = $body;
                f(self, rhs)
            }
        }
        impl $tr<Multivector> for Multivector {
            type Output = Multivector;
            fn $method(self, rhs: Multivector) -> Multivector {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Multivector> for Multivector {
            type Output = Multivector;
            fn $method(self, rhs: &Multivector) -> Multivector {
                (&self).$method(rhs)
            }
        }
        impl $tr<Multivector> for &Multivector {
            type Output = Multivector;
            fn $method(self, rhs: Multivector) -> Multivector {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    let mut out = a.clone();
    out += b;
    out
});
binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    out -= b;
    out
});
binop!(Mul, mul, |a, b| a.gp(b));
binop!(BitXor, bitxor, |a, b| a.wedge(b));

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl AddAssign<Multivector> for Multivector {
    fn add_assign(&mut self, rhs: Multivector) {
        *self += &rhs;
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        assert_eq!(self.dim, rhs.dim, "multivector dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl SubAssign<Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: Multivector) {
        *self -= &rhs;
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(mut self, s: f64) -> Multivector {
        self.coeffs.iter_mut().for_each(|c| *c *= s);
        self
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, s: f64) -> Multivector {
        self.clone() * s
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, m: Multivector) -> Multivector {
        m * self
    }
}

impl Mul<&Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, m: &Multivector) -> Multivector {
        m.clone() * self
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self * -1.0
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.clone() * -1.0
    }
}

impl std::iter::Sum for Multivector {
    /// Panics on an empty iterator (no dimension to infer).
    fn sum<I: Iterator<Item = Multivector>>(mut iter: I) -> Multivector {
        let mut acc = iter.next().expect("sum of an empty multivector iterator");
        for m in iter {
            acc += &m;
        }
        acc
    }
}

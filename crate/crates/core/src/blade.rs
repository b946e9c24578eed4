//! Unit blades as oriented subspaces of ℝᴺ.
//!
//! A unit m-blade stands for an oriented m-dimensional subspace: a vector
//! lies in the subspace iff its wedge with the blade vanishes, two blades
//! describe the same oriented subspace iff they differ by a positive factor,
//! and the Hodge dual describes the orthogonal complement.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeoError, Result};
use crate::multivector::Multivector;

pub type Vector = DVector<f64>;

/// Allowed deviation of |B|² from 1.
pub const UNIT_TOL: f64 = 1e-10;
/// Relative singular-value cutoff of the simplicity rank test.
pub const SIMPLICITY_TOL: f64 = 1e-8;
/// Allowed deviation from orthonormality in an [`OrthoFrame`].
pub const ORTHO_TOL: f64 = 1e-10;
/// Default relative tolerance of [`is_member`].
pub const MEMBER_TOL: f64 = 1e-9;

pub fn to_multivector(v: &Vector) -> Multivector {
    Multivector::vector(v.as_slice())
}

pub fn to_vector(m: &Multivector) -> Vector {
    Vector::from_vec(m.vector_part())
}

/// Dimension of the kernel of v ↦ v∧A on ℝᴺ. Singular values at or below
/// `rel_tol`·|A| count as zero.
pub fn wedge_kernel_dimension(a: &Multivector, rel_tol: f64) -> usize {
    let n = a.dim();
    let masks = 1usize << n;
    let mut mat = DMatrix::<f64>::zeros(masks, n);
    for i in 0..n {
        let w = Multivector::basis_vector(n, i).wedge(a);
        for (row, c) in w.coeffs().iter().enumerate() {
            mat[(row, i)] = *c;
        }
    }
    let cutoff = rel_tol * a.norm();
    let sv = mat.singular_values();
    let rank = sv.iter().filter(|s| **s > cutoff).count();
    n - rank
}

/// Simplicity of a homogeneous grade-m multivector via the kernel test:
/// A is an m-blade iff v ↦ v∧A has an m-dimensional kernel.
pub fn is_simple(a: &Multivector) -> bool {
    match a.grades_above(SIMPLICITY_TOL * a.norm()).single() {
        Some(m) => wedge_kernel_dimension(a, SIMPLICITY_TOL) == m,
        None => false,
    }
}

/// Homogeneous, simple, unit-norm multivector.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitBlade {
    mv: Multivector,
    grade: usize,
}

impl UnitBlade {
    /// Validates homogeneity, unit norm and simplicity. Off-grade noise below
    /// the unit tolerance is projected away.
    pub fn new(mv: Multivector) -> Result<Self> {
        let norm = mv.norm();
        let grade = mv
            .grades_above(UNIT_TOL * norm.max(1.0))
            .single()
            .ok_or(GeoError::NotHomogeneous)?;
        let mv = mv.grade(grade);
        if (mv.norm_squared() - 1.0).abs() > UNIT_TOL {
            return Err(GeoError::NotUnit(mv.norm()));
        }
        let kernel = wedge_kernel_dimension(&mv, SIMPLICITY_TOL);
        if kernel != grade {
            return Err(GeoError::NotSimple { kernel, grade });
        }
        Ok(Self { mv, grade })
    }

    /// Scales `mv` to unit norm before validating.
    pub fn normalized(mv: Multivector) -> Result<Self> {
        let n = mv.norm();
        if n == 0.0 {
            return Err(GeoError::RankDeficient(0.0));
        }
        Self::new(mv * (1.0 / n))
    }

    pub(crate) fn from_trusted(mv: Multivector, grade: usize) -> Self {
        Self { mv, grade }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn dim(&self) -> usize {
        self.mv.dim()
    }

    pub fn as_multivector(&self) -> &Multivector {
        &self.mv
    }

    pub fn into_multivector(self) -> Multivector {
        self.mv
    }

    /// B⁻¹ = Bᵗ for a unit blade.
    pub fn inverse(&self) -> Multivector {
        blade_inverse(self)
    }

    /// ★B, the unit blade of the orthogonal complement.
    pub fn dual(&self) -> UnitBlade {
        UnitBlade::from_trusted(self.mv.hodge(), self.dim() - self.grade)
    }

    pub fn project(&self, a: &Multivector) -> Multivector {
        project(a, self)
    }

    pub fn factor(&self) -> Result<OrthoFrame> {
        factor_blade(self)
    }
}

/// Ordered orthonormal vectors of ℝᴺ.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoFrame {
    vectors: Vec<Vector>,
}

impl OrthoFrame {
    pub fn new(vectors: Vec<Vector>) -> Result<Self> {
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                if (a.dot(b) - target).abs() > ORTHO_TOL {
                    return Err(GeoError::InvalidParameter(format!(
                        "frame vectors {i},{j} are not orthonormal"
                    )));
                }
            }
        }
        Ok(Self { vectors })
    }

    pub(crate) fn from_trusted(vectors: Vec<Vector>) -> Self {
        Self { vectors }
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// τ₁∧…∧τ_m; the scalar 1 in `dim` dimensions for an empty frame.
    pub fn wedge(&self, dim: usize) -> Multivector {
        self.vectors
            .iter()
            .fold(Multivector::scalar(dim, 1.0), |acc, v| {
                acc ^ to_multivector(v)
            })
    }
}

/// Modified Gram–Schmidt in the given order. Returns the orthonormal vectors
/// and the upper-triangular factor R with `vs = Q R`.
pub(crate) fn modified_gram_schmidt(vs: &[Vector]) -> (Vec<Vector>, DMatrix<f64>) {
    let m = vs.len();
    let mut q: Vec<Vector> = vs.to_vec();
    let mut r = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        for i in 0..j {
            let c = q[i].dot(&q[j]);
            r[(i, j)] = c;
            let qi = q[i].clone();
            q[j].axpy(-c, &qi, 1.0);
        }
        let n = q[j].norm();
        r[(j, j)] = n;
        q[j] /= n;
    }
    (q, r)
}

fn smallest_singular_value(vs: &[Vector]) -> f64 {
    let mat = DMatrix::from_columns(vs);
    let sv = mat.singular_values();
    let max = sv.max();
    sv.min() / max.max(1.0)
}

/// Gram–Schmidt the vectors in order and wedge them. Orientation follows the
/// input order.
pub fn blade_from_frame(vs: &[Vector]) -> Result<UnitBlade> {
    let Some(first) = vs.first() else {
        return Err(GeoError::InvalidParameter("empty frame".into()));
    };
    let dim = first.len();
    if let Some(v) = vs.iter().find(|v| v.len() != dim) {
        return Err(GeoError::DimensionMismatch {
            left: dim,
            right: v.len(),
        });
    }
    if vs.len() > dim {
        return Err(GeoError::RankDeficient(0.0));
    }
    let smin = smallest_singular_value(vs);
    if smin <= SIMPLICITY_TOL {
        return Err(GeoError::RankDeficient(smin));
    }
    let (q, _) = modified_gram_schmidt(vs);
    let frame = OrthoFrame::from_trusted(q);
    Ok(UnitBlade::from_trusted(frame.wedge(dim), vs.len()))
}

/// Pivoted Gram–Schmidt over the standard basis vectors after applying
/// `map`: at each step the candidate with the largest residual norm wins,
/// ties going to the lowest index. Returns the chosen indices and the
/// orthonormal vectors. `against` vectors are removed first.
pub(crate) fn pivoted_basis_completion(
    dim: usize,
    count: usize,
    against: &[Vector],
    map: impl Fn(&Vector) -> Vector,
) -> (Vec<usize>, Vec<Vector>) {
    let candidates: Vec<Vector> = (0..dim)
        .map(|i| map(&Vector::from_fn(dim, |r, _| if r == i { 1.0 } else { 0.0 })))
        .collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    let mut basis: Vec<Vector> = against.to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut best: Option<(usize, Vector, f64)> = None;
        for (i, c) in candidates.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let r = orthogonalize(c, &basis);
            let n = r.norm();
            if best.as_ref().is_none_or(|(_, _, bn)| n > bn + 1e-12) {
                best = Some((i, r, n));
            }
        }
        let (i, r, n) = best.expect("enough candidates");
        chosen.push(i);
        let v = r / n;
        basis.push(v.clone());
        out.push(v);
    }
    (chosen, out)
}

/// Removes components along each (orthonormal) basis vector, twice for
/// numerical stability.
pub(crate) fn orthogonalize(v: &Vector, basis: &[Vector]) -> Vector {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = b.dot(&r);
            r.axpy(-c, b, 1.0);
        }
    }
    r
}

/// Orthonormal frame whose wedge reproduces `b`.
pub fn factor_blade(b: &UnitBlade) -> Result<OrthoFrame> {
    let dim = b.dim();
    let m = b.grade();
    if m == 0 {
        return Ok(OrthoFrame::from_trusted(Vec::new()));
    }
    let (_, mut vs) =
        pivoted_basis_completion(dim, m, &[], |e| to_vector(&project(&to_multivector(e), b)));
    let w = OrthoFrame::from_trusted(vs.clone()).wedge(dim);
    if w.inner(b.as_multivector()) < 0.0 {
        let last = vs.last_mut().expect("m >= 1");
        *last *= -1.0;
    }
    let frame = OrthoFrame::from_trusted(vs);
    let diff = (frame.wedge(dim) - b.as_multivector()).norm();
    if diff > 1e-9 {
        let kernel = wedge_kernel_dimension(b.as_multivector(), SIMPLICITY_TOL);
        return Err(GeoError::NotSimple { kernel, grade: m });
    }
    Ok(frame)
}

/// Factor an arbitrary multivector after normalising and validating it.
pub fn factor_multivector(a: &Multivector) -> Result<OrthoFrame> {
    factor_blade(&UnitBlade::normalized(a.clone())?)
}

/// v lies in the subspace of `b` iff |v∧B| ≤ tol·|v|.
pub fn is_member(v: &Vector, b: &UnitBlade) -> bool {
    is_member_tol(v, b, MEMBER_TOL)
}

pub fn is_member_tol(v: &Vector, b: &UnitBlade, tol: f64) -> bool {
    (to_multivector(v) ^ b.as_multivector()).norm() <= tol * v.norm()
}

/// Orthogonal projection onto the subalgebra of the subspace of `b`,
/// P(A) = (A⌟B)⌟B⁻¹ grade by grade.
pub fn project(a: &Multivector, b: &UnitBlade) -> Multivector {
    let inv = b.inverse();
    a.lcontract(b.as_multivector()).lcontract(&inv)
}

/// ★A = Aᵗ i; maps grade r to grade N − r.
pub fn hodge_dual(a: &Multivector) -> Multivector {
    a.hodge()
}

/// B⁻¹ = Bᵗ/|B|².
pub fn blade_inverse(b: &UnitBlade) -> Multivector {
    let mv = b.as_multivector();
    mv.reverse() * (1.0 / mv.norm_squared())
}

/// Unit blade I of the hyperplane with unit normal `n`, oriented so that
/// I n = i.
pub fn hyperplane_blade(n: &Vector) -> Result<UnitBlade> {
    let nm = to_multivector(n);
    UnitBlade::normalized(Multivector::pseudoscalar(n.len()) * nm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_row_slice(c)
    }

    fn e(dim: usize, mask: usize) -> Multivector {
        Multivector::blade(dim, mask, 1.0)
    }

    #[test]
    fn blade_from_frame_examples() {
        let b = blade_from_frame(&[v(&[1., 0., 0.]), v(&[1., 1., 0.])]).unwrap();
        assert!(b.as_multivector().approx_eq(&e(3, 0b11), 1e-14));
        let b = blade_from_frame(&[v(&[0., 1., 0.]), v(&[1., 0., 0.])]).unwrap();
        assert!(b.as_multivector().approx_eq(&-e(3, 0b11), 1e-14));
        assert!(matches!(
            blade_from_frame(&[v(&[1., 0., 0.]), v(&[2., 0., 0.])]),
            Err(GeoError::RankDeficient(_))
        ));
    }

    #[test]
    fn factor_examples() {
        let b = UnitBlade::new(e(3, 0b11)).unwrap();
        let f = factor_blade(&b).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.wedge(3).approx_eq(&e(3, 0b11), 1e-12));
        for t in f.vectors() {
            assert!(t[2].abs() < 1e-15);
        }
        let b = UnitBlade::new(e(3, 0b111)).unwrap();
        assert!(factor_blade(&b)
            .unwrap()
            .wedge(3)
            .approx_eq(&e(3, 0b111), 1e-12));
    }

    #[test]
    fn non_simple_bivector_rejected() {
        let a = (e(4, 0b0011) + e(4, 0b1100)) * (1.0 / 2f64.sqrt());
        // rank oracle: columns e_i ∧ A are independent, so the kernel is {0}
        assert_eq!(wedge_kernel_dimension(&a, SIMPLICITY_TOL), 0);
        assert!(matches!(
            UnitBlade::new(a.clone()),
            Err(GeoError::NotSimple {
                kernel: 0,
                grade: 2
            })
        ));
        assert!(factor_multivector(&a).is_err());
    }

    #[test]
    fn scalar_test_is_not_enough_for_simplicity() {
        // e123 + e456: A Aᵗ is a scalar, yet A is not a blade
        let a = (e(6, 0b000111) + e(6, 0b111000)) * (1.0 / 2f64.sqrt());
        let aat = &a * a.reverse();
        assert!(aat.grade(0).approx_eq(&aat, 1e-14));
        assert!(!is_simple(&a));
    }

    #[test]
    fn membership() {
        let b = UnitBlade::new(e(3, 0b11)).unwrap();
        assert!(is_member(&v(&[1., 0., 0.]), &b));
        assert!(!is_member(&v(&[0., 0., 1.]), &b));
        assert!(is_member(&v(&[0., 0., 0.]), &b));
    }

    #[test]
    fn projection_examples() {
        let b = UnitBlade::new(e(3, 0b11)).unwrap();
        assert!(project(&e(3, 0b1), &b).approx_eq(&e(3, 0b1), 1e-15));
        assert!(project(&e(3, 0b100), &b).is_zero());
        assert!(project(&(e(3, 0b1) + e(3, 0b100)), &b).approx_eq(&e(3, 0b1), 1e-15));
        assert!(project(&Multivector::scalar(3, 2.0), &b)
            .approx_eq(&Multivector::scalar(3, 2.0), 1e-15));
        assert!(project(&e(3, 0b11), &b).approx_eq(&e(3, 0b11), 1e-15));
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(hodge_dual(&Multivector::scalar(3, 1.0)), e(3, 0b111));
        assert_eq!(hodge_dual(&e(3, 0b1)), e(3, 0b110));
        assert_eq!(hodge_dual(&e(3, 0b11)), e(3, 0b100));
    }

    #[test]
    fn inverse_examples() {
        for (mask, expect) in [(0b11usize, -1.0), (0b1, 1.0), (0b111, -1.0)] {
            let b = UnitBlade::new(e(3, mask)).unwrap();
            assert_eq!(blade_inverse(&b), e(3, mask) * expect);
            assert!(
                (b.as_multivector() * b.inverse()).approx_eq(&Multivector::scalar(3, 1.0), 1e-15)
            );
        }
    }

    #[test]
    fn blade_times_dual_is_pseudoscalar() {
        let b = blade_from_frame(&[v(&[1., 2., 0., 1.]), v(&[0., 1., -1., 3.])]).unwrap();
        let prod = b.as_multivector() * b.dual().as_multivector();
        assert!(prod.approx_eq(&Multivector::pseudoscalar(4), 1e-12));
    }

    #[test]
    fn hyperplane_blade_orientation() {
        let i = hyperplane_blade(&v(&[0., 0., 1.])).unwrap();
        assert!(i.as_multivector().approx_eq(&e(3, 0b11), 1e-15));
    }

    #[test]
    fn unit_blade_validation() {
        assert!(matches!(
            UnitBlade::new(e(3, 0b1) + e(3, 0b11)),
            Err(GeoError::NotHomogeneous)
        ));
        assert!(matches!(
            UnitBlade::new(e(3, 0b1) * 2.0),
            Err(GeoError::NotUnit(_))
        ));
    }

    fn arb_frame(dim: usize, m: usize) -> impl Strategy<Value = Vec<Vector>> {
        prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), m)
            .prop_map(|vs| vs.into_iter().map(Vector::from_vec).collect())
    }

    proptest! {
        #[test]
        fn factor_then_wedge_roundtrip(vs in arb_frame(5, 3)) {
            prop_assume!(smallest_singular_value(&vs) > 1e-3);
            let b = blade_from_frame(&vs).unwrap();
            prop_assert!(is_simple(b.as_multivector()));
            let f = factor_blade(&b).unwrap();
            prop_assert!(OrthoFrame::new(f.vectors().to_vec()).is_ok());
            prop_assert!(f.wedge(5).approx_eq(b.as_multivector(), 1e-9));
            let again = blade_from_frame(f.vectors()).unwrap();
            prop_assert!(again.as_multivector().approx_eq(b.as_multivector(), 1e-9));
            for t in &vs {
                prop_assert!(is_member_tol(t, &b, 1e-8));
            }
        }

        #[test]
        fn projection_idempotent_and_grade_preserving(
            vs in arb_frame(4, 2),
            c in prop::collection::vec(-1.0f64..1.0, 16),
        ) {
            prop_assume!(smallest_singular_value(&vs) > 1e-3);
            let b = blade_from_frame(&vs).unwrap();
            let a = Multivector::new(4, c).unwrap();
            let p = project(&a, &b);
            prop_assert!(project(&p, &b).approx_eq(&p, 1e-12));
            for r in 0..=4 {
                prop_assert!(project(&a.grade(r), &b).approx_eq(&p.grade(r), 1e-12));
            }
        }
    }
}

//! Left-invariant metric on a Lie algebra and its Levi-Civita connection.
//!
//! On left-invariant fields the connection reduces to a bilinear table fixed
//! by the three-bracket closed form
//!     `2⟨∇_X Y, Z⟩ = ⟨[X,Y],Z⟩ − ⟨[Y,Z],X⟩ + ⟨[Z,X],Y⟩`,
//! validated here through its two testable invariants: torsion
//! `[X,Y] = ∇_X Y − ∇_Y X` and metric compatibility.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::GeometryError;
use crate::lie::{LieAlgebra, Subspace};
use crate::linalg;
use crate::report::CheckReport;

/// A Lie algebra together with a positive-definite Gram matrix.
///
/// The Gram matrix is reflected from its lower triangle at construction, so
/// symmetry is exact; positive definiteness is certified by a Cholesky
/// factorization kept for solves.
#[derive(Debug, Clone)]
pub struct MetricLieAlgebra {
    algebra: LieAlgebra,
    gram: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl PartialEq for MetricLieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.gram == other.gram
    }
}

impl MetricLieAlgebra {
    pub fn new(algebra: LieAlgebra, gram: DMatrix<f64>) -> Result<Self, GeometryError> {
        let n = algebra.dim();
        if gram.nrows() != n || gram.ncols() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: gram.nrows(),
            });
        }
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                asym = asym.max((gram[(i, j)] - gram[(j, i)]).abs());
            }
        }
        if asym > 1e-12 {
            return Err(GeometryError::AsymmetricMetric { residual: asym });
        }
        let gram = DMatrix::from_fn(
            n,
            n,
            |i, j| if i <= j { gram[(i, j)] } else { gram[(j, i)] },
        );
        let chol = Cholesky::new(gram.clone()).ok_or(GeometryError::SingularMetric)?;
        Ok(MetricLieAlgebra {
            algebra,
            gram,
            chol,
        })
    }

    pub fn with_identity_metric(algebra: LieAlgebra) -> Result<Self, GeometryError> {
        let n = algebra.dim();
        MetricLieAlgebra::new(algebra, DMatrix::identity(n, n))
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// Same geometry in the rescaled basis f = s·e: constants scale by s,
    /// Gram entries by s².
    pub fn rescaled(&self, s: f64) -> MetricLieAlgebra {
        MetricLieAlgebra::new(self.algebra.rescaled(s), &self.gram * (s * s))
            .expect("rescaling preserves positive definiteness")
    }

    /// ⟨x, y⟩ = xᵀ G y.
    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<f64, GeometryError> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(x.dot(&(&self.gram * y)))
    }

    pub fn norm(&self, x: &DVector<f64>) -> f64 {
        linalg::g_norm(&self.gram, x)
    }

    /// Solve G·x = b.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    /// The connection table of the Levi-Civita connection.
    pub fn levi_civita(&self) -> ConnectionTable {
        let n = self.dim();
        let mut brackets = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                brackets.push(self.algebra.bracket_basis(i, j));
            }
        }
        let g_brackets: Vec<DVector<f64>> = brackets.iter().map(|b| &self.gram * b).collect();
        let mut coeffs = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut rhs = DVector::zeros(n);
                for k in 0..n {
                    // ⟨[e_i,e_j],e_k⟩ − ⟨[e_j,e_k],e_i⟩ + ⟨[e_k,e_i],e_j⟩
                    let t1 = g_brackets[i * n + j][k];
                    let t2 = g_brackets[j * n + k][i];
                    let t3 = g_brackets[k * n + i][j];
                    rhs[k] = 0.5 * (t1 - t2 + t3);
                }
                coeffs.push(self.chol.solve(&rhs));
            }
        }
        ConnectionTable { dim: n, coeffs }
    }

    /// (Z(g), Z⊥(g)): the center and its G-orthogonal complement.
    ///
    /// The center basis is Euclidean-orthonormal; the complement basis is
    /// G-orthonormal. The two are mutually G-orthogonal and jointly span.
    pub fn center_perp(&self) -> (Subspace, Subspace) {
        let center = self.algebra.center();
        let n = self.dim();
        if center.dim() == 0 {
            let full = linalg::gram_schmidt_g(&self.gram, &DMatrix::identity(n, n))
                .expect("identity columns are independent");
            return (center, Subspace::from_orthonormal(full));
        }
        if center.dim() == n {
            return (center, Subspace::zero(n));
        }
        let constraints = center.basis().transpose() * &self.gram;
        let raw = linalg::kernel(&constraints);
        let basis = linalg::gram_schmidt_g(&self.gram, &raw).expect("kernel basis is independent");
        (center, Subspace::from_orthonormal(basis))
    }

    /// Residual of ⟨ad x (·), ·⟩ being skew: max over basis pairs of
    /// `|⟨[x,e_a],e_b⟩ + ⟨e_a,[x,e_b]⟩|`.
    pub fn ad_skew_residual(&self, x: &DVector<f64>) -> Result<f64, GeometryError> {
        let ad = self.algebra.ad_matrix(x)?;
        let m = ad.transpose() * &self.gram + &self.gram * ad;
        Ok(linalg::inf_norm_mat(&m))
    }

    pub fn is_ad_skew_adjoint(
        &self,
        x: &DVector<f64>,
        tol: f64,
    ) -> Result<CheckReport, GeometryError> {
        let mut report = CheckReport::new(tol);
        let residual = self.ad_skew_residual(x)?;
        report.push("ad_skew", residual);
        Ok(report)
    }

    /// Aggregates the skew-adjointness residual over all basis vectors;
    /// by linearity of ad in x this decides bi-invariance of the metric.
    pub fn is_bi_invariant(&self, tol: f64) -> CheckReport {
        let mut report = CheckReport::new(tol);
        for i in 0..self.dim() {
            let residual = self
                .ad_skew_residual(&self.algebra.basis_vector(i))
                .expect("basis vector has the right length");
            report.push_with_witness(
                format!("ad_skew[{}]", self.algebra.label(i)),
                residual,
                format!("x={}", self.algebra.label(i)),
            );
        }
        report
    }

    /// Max residual and witness label of the bi-invariance grid.
    pub fn bi_invariance_residual(&self) -> (f64, String) {
        let mut worst = 0.0f64;
        let mut witness = String::new();
        for i in 0..self.dim() {
            let r = self
                .ad_skew_residual(&self.algebra.basis_vector(i))
                .expect("basis vector has the right length");
            if r > worst {
                worst = r;
                witness = format!("x={}", self.algebra.label(i));
            }
        }
        (worst, witness)
    }

    /// Residual of `∇_X Y = ½[X,Y]` over a basis of Z⊥(g) (no 2-step gate).
    pub fn half_bracket_residual(&self) -> (f64, Option<String>) {
        let table = self.levi_civita();
        let (_, complement) = self.center_perp();
        let mut worst = 0.0f64;
        let mut witness = None;
        for a in 0..complement.dim() {
            for b in 0..complement.dim() {
                let x: DVector<f64> = complement.basis().column(a).into_owned();
                let y: DVector<f64> = complement.basis().column(b).into_owned();
                let lhs = table.nabla(&x, &y).expect("dimensions match");
                let rhs = 0.5 * self.algebra.bracket(&x, &y).expect("dimensions match");
                let r = linalg::inf_norm_vec(&(lhs - rhs));
                if r > worst {
                    worst = r;
                    witness = Some(format!("pair ({a},{b}) of the Z-perp basis"));
                }
            }
        }
        (worst, witness)
    }

    /// The 2-step connection identity `∇_X Y = ½[X,Y]` for X, Y ∈ Z⊥(g),
    /// reported as a residual.
    pub fn check_half_bracket(&self, tol: f64) -> Result<CheckReport, GeometryError> {
        if !self.algebra.is_two_step() {
            return Err(GeometryError::NotTwoStep);
        }
        let mut report = CheckReport::new(tol);
        let (residual, witness) = self.half_bracket_residual();
        report.push_item("half_bracket", residual, witness, false);
        Ok(report)
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<(), GeometryError> {
        if v.len() != self.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// Coefficients Γ with `∇_{e_i} e_j = Σ_k Γ[i][j][k] e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionTable {
    dim: usize,
    /// Indexed by i*dim + j.
    coeffs: Vec<DVector<f64>>,
}

impl ConnectionTable {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.coeffs[i * self.dim + j]
    }

    pub fn coefficient(&self, i: usize, j: usize, k: usize) -> f64 {
        self.coeffs[i * self.dim + j][k]
    }

    /// Bilinear evaluation `∇_x y = Σ x_i y_j Γ[i][j][·]`.
    pub fn nabla(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>, GeometryError> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                got: if x.len() != self.dim {
                    x.len()
                } else {
                    y.len()
                },
            });
        }
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                let w = x[i] * y[j];
                if w != 0.0 {
                    out += w * &self.coeffs[i * self.dim + j];
                }
            }
        }
        Ok(out)
    }

    /// Max over basis pairs of `‖Γ[i][j][·] − Γ[j][i][·] − C[i][j][·]‖∞`.
    pub fn torsion_residual(&self, algebra: &LieAlgebra) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let diff = self.entry(i, j) - self.entry(j, i) - algebra.bracket_basis(i, j);
                worst = worst.max(linalg::inf_norm_vec(&diff));
            }
        }
        worst
    }

    /// Max over basis triples of `|⟨∇_{e_i}e_j, e_k⟩ + ⟨e_j, ∇_{e_i}e_k⟩|`.
    pub fn compatibility_residual(&self, metric: &MetricLieAlgebra) -> f64 {
        let n = self.dim;
        let g = metric.gram();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let gj = g * self.entry(i, j);
                for k in 0..n {
                    let v = gj[k] + (g * self.entry(i, k))[j];
                    worst = worst.max(v.abs());
                }
            }
        }
        worst
    }

    #[cfg(test)]
    pub(crate) fn perturbed(&self, i: usize, j: usize, k: usize, delta: f64) -> ConnectionTable {
        let mut out = self.clone();
        out.coeffs[i * self.dim + j][k] += delta;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::BracketEntry;
    use approx::assert_abs_diff_eq;

    fn h3(c: f64) -> LieAlgebra {
        LieAlgebra::new(3, &[BracketEntry::new(0, 1, 2, c)]).unwrap()
    }

    fn abelian(n: usize) -> LieAlgebra {
        LieAlgebra::new(n, &[]).unwrap()
    }

    fn filiform4() -> LieAlgebra {
        LieAlgebra::new(
            4,
            &[
                BracketEntry::new(0, 1, 2, 1.0),
                BracketEntry::new(0, 2, 3, 1.0),
            ],
        )
        .unwrap()
    }

    /// Independent Koszul oracle: evaluates the three-bracket closed form for
    /// every (i, j, k) and recovers the coefficients with an explicit inverse
    /// (LU) instead of the Cholesky solve used by the implementation.
    pub(crate) fn koszul_oracle(m: &MetricLieAlgebra) -> Vec<DVector<f64>> {
        let n = m.dim();
        let a = m.algebra();
        let g = m.gram();
        let ginv = g.clone().try_inverse().expect("positive definite");
        let inner = |u: &DVector<f64>, v: &DVector<f64>| u.dot(&(g * v));
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut rhs = DVector::zeros(n);
                for k in 0..n {
                    let ei = a.basis_vector(i);
                    let ej = a.basis_vector(j);
                    let ek = a.basis_vector(k);
                    let t1 = inner(&a.bracket(&ei, &ej).unwrap(), &ek);
                    let t2 = inner(&a.bracket(&ej, &ek).unwrap(), &ei);
                    let t3 = inner(&a.bracket(&ek, &ei).unwrap(), &ej);
                    rhs[k] = 0.5 * (t1 - t2 + t3);
                }
                out.push(&ginv * rhs);
            }
        }
        out
    }

    #[test]
    fn metric_requires_symmetry_and_positivity() {
        let a = abelian(2);
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            MetricLieAlgebra::new(a.clone(), asym),
            Err(GeometryError::AsymmetricMetric { .. })
        ));
        let indef = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(matches!(
            MetricLieAlgebra::new(a, indef),
            Err(GeometryError::SingularMetric)
        ));
    }

    #[test]
    fn inner_product_values() {
        let a = h3(1.0);
        let m = MetricLieAlgebra::with_identity_metric(a.clone()).unwrap();
        let e1 = a.basis_vector(0);
        let e2 = a.basis_vector(1);
        assert_eq!(m.inner(&e1, &e1).unwrap(), 1.0);
        assert_eq!(m.inner(&e1, &e2).unwrap(), 0.0);

        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0, 4.0]));
        let m = MetricLieAlgebra::new(a.clone(), g).unwrap();
        let e3 = a.basis_vector(2);
        assert_eq!(m.inner(&e3, &e3).unwrap(), 4.0);
    }

    #[test]
    fn heisenberg_connection_table_is_the_six_half_coefficients() {
        // ∇_{e1}e2 = ½e3, ∇_{e2}e1 = −½e3, ∇_{e1}e3 = ∇_{e3}e1 = −½e2,
        // ∇_{e2}e3 = ∇_{e3}e2 = ½e1, everything else zero.
        let m = MetricLieAlgebra::with_identity_metric(h3(1.0)).unwrap();
        let t = m.levi_civita();
        let expect = |i: usize, j: usize, v: [f64; 3]| {
            let got = t.entry(i, j);
            for k in 0..3 {
                assert_abs_diff_eq!(got[k], v[k], epsilon = 1e-15);
            }
        };
        expect(0, 1, [0.0, 0.0, 0.5]);
        expect(1, 0, [0.0, 0.0, -0.5]);
        expect(0, 2, [0.0, -0.5, 0.0]);
        expect(2, 0, [0.0, -0.5, 0.0]);
        expect(1, 2, [0.5, 0.0, 0.0]);
        expect(2, 1, [0.5, 0.0, 0.0]);
        expect(0, 0, [0.0; 3]);
        expect(1, 1, [0.0; 3]);
        expect(2, 2, [0.0; 3]);
    }

    #[test]
    fn doubled_constant_doubles_the_table() {
        let m = MetricLieAlgebra::with_identity_metric(h3(2.0)).unwrap();
        let t = m.levi_civita();
        assert_abs_diff_eq!(t.coefficient(0, 1, 2), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.coefficient(0, 2, 1), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.coefficient(1, 2, 0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn abelian_connection_vanishes() {
        let m = MetricLieAlgebra::with_identity_metric(abelian(4)).unwrap();
        let t = m.levi_civita();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(linalg::inf_norm_vec(t.entry(i, j)), 0.0);
            }
        }
    }

    #[test]
    fn connection_matches_koszul_oracle_with_skew_gram() {
        let a = h3(1.0);
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.5, 0.0, 2.0, 0.0, 0.5, 0.0, 1.0]);
        let m = MetricLieAlgebra::new(a, g).unwrap();
        let t = m.levi_civita();
        let oracle = koszul_oracle(&m);
        for i in 0..3 {
            for j in 0..3 {
                let diff = t.entry(i, j) - &oracle[i * 3 + j];
                assert!(linalg::inf_norm_vec(&diff) < 1e-12);
            }
        }
        assert!(t.torsion_residual(m.algebra()) < 1e-12);
        assert!(t.compatibility_residual(&m) < 1e-12);
    }

    #[test]
    fn nabla_evaluates_bilinearly() {
        let a = h3(1.0);
        let m = MetricLieAlgebra::with_identity_metric(a.clone()).unwrap();
        let t = m.levi_civita();
        let e1 = a.basis_vector(0);
        let e2 = a.basis_vector(1);
        let half_e3 = 0.5 * a.basis_vector(2);
        assert_eq!(t.nabla(&e1, &e2).unwrap(), half_e3);
        for i in 0..3 {
            let ei = a.basis_vector(i);
            assert_eq!(t.nabla(&ei, &ei).unwrap(), DVector::zeros(3));
        }
    }

    #[test]
    fn perturbing_the_table_breaks_an_invariant() {
        let m = MetricLieAlgebra::with_identity_metric(h3(1.0)).unwrap();
        let t = m.levi_civita();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let bad = t.perturbed(i, j, k, 1e-3);
                    let broken = bad
                        .torsion_residual(m.algebra())
                        .max(bad.compatibility_residual(&m));
                    assert!(
                        broken > 1e-4,
                        "perturbing ({i},{j},{k}) left residual {broken:.3e}"
                    );
                }
            }
        }
    }

    #[test]
    fn center_perp_heisenberg_identity_metric() {
        let m = MetricLieAlgebra::with_identity_metric(h3(1.0)).unwrap();
        let (z, zp) = m.center_perp();
        assert_eq!(z.dim(), 1);
        assert_eq!(zp.dim(), 2);
        assert!(z.contains(&m.algebra().basis_vector(2), 1e-12));
        for c in 0..2 {
            let w: DVector<f64> = zp.basis().column(c).into_owned();
            assert_abs_diff_eq!(w[2], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn center_perp_with_off_diagonal_metric_is_g_orthogonal() {
        let a = h3(1.0);
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.5, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0]);
        let m = MetricLieAlgebra::new(a, g).unwrap();
        let (z, zp) = m.center_perp();
        assert_eq!((z.dim(), zp.dim()), (1, 2));
        for zc in 0..z.dim() {
            for wc in 0..zp.dim() {
                let zv: DVector<f64> = z.basis().column(zc).into_owned();
                let wv: DVector<f64> = zp.basis().column(wc).into_owned();
                assert_abs_diff_eq!(m.inner(&zv, &wv).unwrap(), 0.0, epsilon = 1e-12);
            }
        }
        // e1 − ½e3 is G-orthogonal to the center line span{e3}.
        let corrected = DVector::from_vec(vec![1.0, 0.0, -0.5]);
        let e3 = m.algebra().basis_vector(2);
        assert_abs_diff_eq!(m.inner(&corrected, &e3).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn center_perp_abelian_complement_is_zero() {
        let m = MetricLieAlgebra::with_identity_metric(abelian(3)).unwrap();
        let (z, zp) = m.center_perp();
        assert_eq!(z.dim(), 3);
        assert_eq!(zp.dim(), 0);
    }

    #[test]
    fn half_bracket_holds_on_two_step_fails_on_filiform() {
        for c in [1.0, 2.0] {
            let m = MetricLieAlgebra::with_identity_metric(h3(c)).unwrap();
            let report = m.check_half_bracket(1e-9).unwrap();
            assert!(report.all_pass());
        }
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 1.0]));
        let m = MetricLieAlgebra::new(h3(1.0), g).unwrap();
        assert!(m.check_half_bracket(1e-9).unwrap().all_pass());

        let fil = MetricLieAlgebra::with_identity_metric(filiform4()).unwrap();
        assert!(matches!(
            fil.check_half_bracket(1e-9),
            Err(GeometryError::NotTwoStep)
        ));
        // Koszul gives ∇_{e1}e3 = −½e2 + ½e4 while ½[e1,e3] = ½e4.
        let (residual, _) = fil.half_bracket_residual();
        assert_abs_diff_eq!(residual, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn ad_skew_residual_values() {
        let m = MetricLieAlgebra::with_identity_metric(h3(1.0)).unwrap();
        let e1 = m.algebra().basis_vector(0);
        let e3 = m.algebra().basis_vector(2);
        assert_abs_diff_eq!(m.ad_skew_residual(&e1).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.ad_skew_residual(&e3).unwrap(), 0.0, epsilon = 1e-15);

        let ab = MetricLieAlgebra::with_identity_metric(abelian(3)).unwrap();
        let x = DVector::from_vec(vec![1.0, -2.0, 3.0]);
        assert_eq!(ab.ad_skew_residual(&x).unwrap(), 0.0);
    }

    #[test]
    fn bi_invariance_verdicts() {
        let ab = MetricLieAlgebra::with_identity_metric(abelian(4)).unwrap();
        assert!(ab.is_bi_invariant(1e-9).all_pass());

        let m = MetricLieAlgebra::with_identity_metric(h3(1.0)).unwrap();
        let report = m.is_bi_invariant(1e-9);
        assert!(!report.all_pass());
        let failing = report.checks.iter().find(|c| !c.pass).unwrap();
        assert_eq!(failing.witness.as_deref(), Some("x=e1"));

        let h5 = LieAlgebra::new(
            5,
            &[
                BracketEntry::new(0, 1, 4, 1.0),
                BracketEntry::new(2, 3, 4, 1.0),
            ],
        )
        .unwrap();
        let m5 = MetricLieAlgebra::with_identity_metric(h5).unwrap();
        assert!(!m5.is_bi_invariant(1e-9).all_pass());
    }
}

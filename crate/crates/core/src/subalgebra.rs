//! Lie subalgebras as submanifold shadows: induced metric, Gauss/Weingarten
//! decomposition, tangential/normal φ-splitting, the Q = Ψ² operator and its
//! spectrum, covariant derivatives of the splitting operators, Wirtinger and
//! slant angles.
//!
//! All tensors are evaluated on left-invariant fields, so everything is a
//! finite matrix computation against a G-orthonormal basis of the subalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::contact::AlmostContactStructure;
use crate::error::GeometryError;
use crate::linalg;
use crate::metric::{ConnectionTable, MetricLieAlgebra};
use crate::report::CheckReport;

/// Eigenvalue clusters closer than this merge for multiplicity counting.
pub const SPECTRUM_CLUSTER_GAP: f64 = 1e-7;

/// A subalgebra of a metric Lie algebra, carried by a G-orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subalgebra {
    metric: MetricLieAlgebra,
    structure: Option<AlmostContactStructure>,
    /// n×m, columns G-orthonormal.
    basis: DMatrix<f64>,
    /// n×(n−m), columns G-orthonormal, G-orthogonal to `basis`.
    normal_basis: DMatrix<f64>,
    connection: ConnectionTable,
    closure_residual: f64,
    closure_witness: Option<(usize, usize)>,
}

/// The Wirtinger angle of a tangent direction, when φ does not kill it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WirtingerAngle {
    Angle(f64),
    Undefined,
}

/// Outcome of the slant test.
#[derive(Debug, Clone)]
pub enum SlantVerdict {
    Slant(f64),
    NotSlant {
        first: DVector<f64>,
        second: DVector<f64>,
    },
    DegenerateAllUndefined,
}

/// Q = Ψ² together with its spectral facts.
#[derive(Debug, Clone)]
pub struct QSpectrum {
    pub q: DMatrix<f64>,
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// (cluster mean, multiplicity), gaps ≤ SPECTRUM_CLUSTER_GAP merged.
    pub clusters: Vec<(f64, usize)>,
    pub self_adjoint_residual: f64,
}

impl Subalgebra {
    /// G-orthonormalize a raw basis and require bracket closure.
    pub fn orthonormalize(
        metric: &MetricLieAlgebra,
        structure: Option<&AlmostContactStructure>,
        raw_basis: &DMatrix<f64>,
        tol: f64,
    ) -> Result<Self, GeometryError> {
        let sub = Self::spanning(metric, structure, raw_basis)?;
        if sub.closure_residual > tol {
            let (i, j) = sub.closure_witness.unwrap_or((0, 0));
            return Err(GeometryError::NotClosed {
                residual: sub.closure_residual,
                i,
                j,
            });
        }
        Ok(sub)
    }

    /// G-orthonormalize a raw basis, admitting non-closed subspaces; the
    /// closure residual stays available for reporting.
    pub fn spanning(
        metric: &MetricLieAlgebra,
        structure: Option<&AlmostContactStructure>,
        raw_basis: &DMatrix<f64>,
    ) -> Result<Self, GeometryError> {
        let n = metric.dim();
        if raw_basis.nrows() != n {
            return Err(GeometryError::DimensionMismatch {
                expected: n,
                got: raw_basis.nrows(),
            });
        }
        if let Some(s) = structure {
            if s.dim() != n {
                return Err(GeometryError::DimensionMismatch {
                    expected: n,
                    got: s.dim(),
                });
            }
        }
        let m = raw_basis.ncols();
        if m == 0 || m > n {
            return Err(GeometryError::InvalidParameter(format!(
                "subalgebra basis must have between 1 and {n} columns, got {m}"
            )));
        }
        let sigma = linalg::smallest_singular_value(raw_basis);
        if sigma <= linalg::rank_tolerance(linalg::largest_singular_value(raw_basis)) {
            return Err(GeometryError::DependentBasis { sigma });
        }
        let basis = linalg::gram_schmidt_g(metric.gram(), raw_basis)?;
        let normal_basis = if m == n {
            DMatrix::zeros(n, 0)
        } else {
            let constraints = basis.transpose() * metric.gram();
            let raw_normal = linalg::kernel(&constraints);
            linalg::gram_schmidt_g(metric.gram(), &raw_normal)?
        };

        let mut closure_residual = 0.0f64;
        let mut closure_witness = None;
        for a in 0..m {
            for b in (a + 1)..m {
                let u: DVector<f64> = basis.column(a).into_owned();
                let v: DVector<f64> = basis.column(b).into_owned();
                let br = metric.algebra().bracket(&u, &v)?;
                let normal_part = linalg::g_normal_component(metric.gram(), &basis, &br);
                let r = linalg::g_norm(metric.gram(), &normal_part);
                if r > closure_residual {
                    closure_residual = r;
                    closure_witness = Some((a, b));
                }
            }
        }

        Ok(Subalgebra {
            metric: metric.clone(),
            structure: structure.cloned(),
            basis,
            normal_basis,
            connection: metric.levi_civita(),
            closure_residual,
            closure_witness,
        })
    }

    pub fn metric(&self) -> &MetricLieAlgebra {
        &self.metric
    }

    pub fn structure(&self) -> Option<&AlmostContactStructure> {
        self.structure.as_ref()
    }

    pub fn ambient_dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn codim(&self) -> usize {
        self.normal_basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn normal_basis(&self) -> &DMatrix<f64> {
        &self.normal_basis
    }

    pub fn connection(&self) -> &ConnectionTable {
        &self.connection
    }

    pub fn closure_residual(&self) -> f64 {
        self.closure_residual
    }

    pub fn closure_witness(&self) -> Option<(usize, usize)> {
        self.closure_witness
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        self.closure_residual <= tol
    }

    /// G-orthogonal split x = tangent + normal.
    pub fn project(&self, x: &DVector<f64>) -> Result<(DVector<f64>, DVector<f64>), GeometryError> {
        self.check_len(x)?;
        let coords = self.basis.transpose() * (self.metric.gram() * x);
        let tangent = &self.basis * coords;
        let normal = x - &tangent;
        Ok((tangent, normal))
    }

    pub fn tangent_part(&self, x: &DVector<f64>) -> Result<DVector<f64>, GeometryError> {
        Ok(self.project(x)?.0)
    }

    pub fn normal_part(&self, x: &DVector<f64>) -> Result<DVector<f64>, GeometryError> {
        Ok(self.project(x)?.1)
    }

    fn require_tangent(&self, x: &DVector<f64>, tol: f64) -> Result<(), GeometryError> {
        let normal = self.normal_part(x)?;
        let r = linalg::g_norm(self.metric.gram(), &normal);
        if r > tol * self.metric.norm(x).max(1.0) {
            return Err(GeometryError::NotTangent { residual: r });
        }
        Ok(())
    }

    fn require_normal(&self, v: &DVector<f64>, tol: f64) -> Result<(), GeometryError> {
        let tangent = self.tangent_part(v)?;
        let r = linalg::g_norm(self.metric.gram(), &tangent);
        if r > tol * self.metric.norm(v).max(1.0) {
            return Err(GeometryError::NotNormal { residual: r });
        }
        Ok(())
    }

    /// Gauss split of the ambient connection: ∇̃_x y = ∇_x y + h(x, y).
    ///
    /// Returns (induced connection part, second fundamental form part).
    pub fn gauss_decompose(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        tol: f64,
    ) -> Result<(DVector<f64>, DVector<f64>), GeometryError> {
        self.require_tangent(x, tol)?;
        self.require_tangent(y, tol)?;
        let ambient = self.connection.nabla(x, y)?;
        self.project(&ambient)
    }

    /// Weingarten split of the ambient connection along a normal field:
    /// ∇̃_x v = −A_v x + ∇⊥_x v.
    ///
    /// Returns (shape operator value A_v x, normal connection part).
    pub fn weingarten(
        &self,
        v: &DVector<f64>,
        x: &DVector<f64>,
        tol: f64,
    ) -> Result<(DVector<f64>, DVector<f64>), GeometryError> {
        self.require_normal(v, tol)?;
        self.require_tangent(x, tol)?;
        let ambient = self.connection.nabla(x, v)?;
        let (tangent, normal) = self.project(&ambient)?;
        Ok((-tangent, normal))
    }

    /// Max over tangent pairs and normal directions of
    /// |⟨A_v x, y⟩ − ⟨h(x,y), v⟩| — the two sides come from independent
    /// code paths (Weingarten vs Gauss).
    pub fn duality_residual(&self) -> f64 {
        let m = self.dim();
        let p = self.codim();
        let tol = 1e-6; // tangency gates are exact here by construction
        let mut worst = 0.0f64;
        for a in 0..m {
            let x: DVector<f64> = self.basis.column(a).into_owned();
            for b in 0..m {
                let y: DVector<f64> = self.basis.column(b).into_owned();
                let (_, h) = self
                    .gauss_decompose(&x, &y, tol)
                    .expect("basis columns are tangent");
                for c in 0..p {
                    let v: DVector<f64> = self.normal_basis.column(c).into_owned();
                    let (shape, _) = self
                        .weingarten(&v, &x, tol)
                        .expect("normal basis is normal");
                    let lhs = self.metric.inner(&shape, &y).expect("lengths match");
                    let rhs = self.metric.inner(&h, &v).expect("lengths match");
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }

    fn require_structure(&self) -> Result<&AlmostContactStructure, GeometryError> {
        self.structure.as_ref().ok_or(GeometryError::NoStructure)
    }

    /// φx split into its tangential part Ψx and normal part Γx.
    pub fn phi_split(
        &self,
        x: &DVector<f64>,
    ) -> Result<(DVector<f64>, DVector<f64>), GeometryError> {
        let s = self.require_structure()?;
        self.check_len(x)?;
        self.project(&(&s.phi * x))
    }

    /// φv split into its tangential part ψv and normal part γv, v normal.
    pub fn phi_split_normal(
        &self,
        v: &DVector<f64>,
    ) -> Result<(DVector<f64>, DVector<f64>), GeometryError> {
        let s = self.require_structure()?;
        self.check_len(v)?;
        self.project(&(&s.phi * v))
    }

    /// Ψ as an m×m matrix in the G-orthonormal subalgebra basis: BᵀGφB.
    pub fn psi_matrix(&self) -> Result<DMatrix<f64>, GeometryError> {
        let s = self.require_structure()?;
        Ok(self.basis.transpose() * self.metric.gram() * &s.phi * &self.basis)
    }

    /// Γ as a (n−m)×m matrix: normal coordinates of φ on tangent vectors.
    pub fn gamma_matrix(&self) -> Result<DMatrix<f64>, GeometryError> {
        let s = self.require_structure()?;
        Ok(self.normal_basis.transpose() * self.metric.gram() * &s.phi * &self.basis)
    }

    /// Q = Ψ² on the subalgebra with its spectrum and cluster structure.
    pub fn q_operator(&self) -> Result<QSpectrum, GeometryError> {
        self.q_operator_with_cluster_gap(SPECTRUM_CLUSTER_GAP)
    }

    /// Same as `q_operator` with an explicit merge gap for the clusters.
    pub fn q_operator_with_cluster_gap(&self, gap: f64) -> Result<QSpectrum, GeometryError> {
        let psi = self.psi_matrix()?;
        let q = &psi * &psi;
        let self_adjoint_residual = linalg::inf_norm_mat(&(&q - q.transpose()));
        let sym = 0.5 * (&q + q.transpose());
        let eigen = SymmetricEigen::new(sym);
        let mut eigenvalues: Vec<f64> = eigen.eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let clusters = cluster_eigenvalues(&eigenvalues, gap);
        Ok(QSpectrum {
            q,
            eigenvalues,
            clusters,
            self_adjoint_residual,
        })
    }

    /// Spectral checks on Q: self-adjointness, eigenvalue range [−1, 0],
    /// and even multiplicity of every nonzero eigenvalue cluster.
    pub fn q_report(&self, tol: f64) -> Result<CheckReport, GeometryError> {
        let spectrum = self.q_operator()?;
        let mut report = CheckReport::new(tol);
        report.push("q_self_adjoint", spectrum.self_adjoint_residual);
        let range = spectrum
            .eigenvalues
            .iter()
            .map(|l| (-1.0 - l).max(*l - 0.0).max(0.0))
            .fold(0.0, f64::max);
        report.push("q_spectrum_range", range);
        let mut odd = 0.0f64;
        let mut witness = None;
        for (mean, mult) in &spectrum.clusters {
            if mean.abs() > tol && mult % 2 == 1 {
                odd = 1.0;
                witness = Some(format!("eigenvalue {mean:.6} has multiplicity {mult}"));
            }
        }
        report.push_item("q_even_multiplicity", odd, witness, false);
        Ok(report)
    }

    /// Covariant derivative of Ψ along tangent fields:
    /// (∇_x Ψ)y = ∇_x(Ψy) − Ψ(∇_x y), where ∇ is the induced connection.
    pub fn nabla_psi(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        tol: f64,
    ) -> Result<DVector<f64>, GeometryError> {
        self.require_structure()?;
        self.require_tangent(x, tol)?;
        self.require_tangent(y, tol)?;
        let psi_y = self.phi_split(y)?.0;
        let first = self.tangent_part(&self.connection.nabla(x, &psi_y)?)?;
        let induced = self.tangent_part(&self.connection.nabla(x, y)?)?;
        let second = self.phi_split(&induced)?.0;
        Ok(first - second)
    }

    /// Covariant derivative of Q = Ψ² along tangent fields.
    pub fn nabla_q(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        tol: f64,
    ) -> Result<DVector<f64>, GeometryError> {
        self.require_structure()?;
        self.require_tangent(x, tol)?;
        self.require_tangent(y, tol)?;
        let q_y = {
            let psi_y = self.phi_split(y)?.0;
            self.phi_split(&psi_y)?.0
        };
        let first = self.tangent_part(&self.connection.nabla(x, &q_y)?)?;
        let induced = self.tangent_part(&self.connection.nabla(x, y)?)?;
        let second = {
            let psi = self.phi_split(&induced)?.0;
            self.phi_split(&psi)?.0
        };
        Ok(first - second)
    }

    /// Covariant derivative of the normal-part operator N (the Γ of the
    /// φ-split) along tangent fields: (∇_x N)y = ∇⊥_x(Ny) − N(∇_x y).
    pub fn nabla_normal_operator(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
        tol: f64,
    ) -> Result<DVector<f64>, GeometryError> {
        let s = self.require_structure()?;
        self.require_tangent(x, tol)?;
        self.require_tangent(y, tol)?;
        let n_y = self.phi_split(y)?.1;
        let first = self.normal_part(&self.connection.nabla(x, &n_y)?)?;
        let induced = self.tangent_part(&self.connection.nabla(x, y)?)?;
        let second = self.normal_part(&(&s.phi * induced))?;
        Ok(first - second)
    }

    /// θ(x) = arccos(‖Ψx‖/‖φx‖) ∈ [0, π/2]; Undefined when φx vanishes.
    pub fn wirtinger_angle(
        &self,
        x: &DVector<f64>,
        tol: f64,
    ) -> Result<WirtingerAngle, GeometryError> {
        let s = self.require_structure()?;
        self.check_len(x)?;
        if self.metric.norm(x) <= tol {
            return Err(GeometryError::ZeroVector);
        }
        let phi_x = &s.phi * x;
        let denom = self.metric.norm(&phi_x);
        if denom <= tol {
            return Ok(WirtingerAngle::Undefined);
        }
        let psi_x = self.tangent_part(&phi_x)?;
        let ratio = (self.metric.norm(&psi_x) / denom).clamp(0.0, 1.0);
        Ok(WirtingerAngle::Angle(
            ratio.acos().clamp(0.0, std::f64::consts::FRAC_PI_2),
        ))
    }

    /// Slant test: Q restricted to the G-orthogonal complement of ξ∩h must be
    /// −cos²θ·I for a single θ, corroborated by sampled Wirtinger angles.
    pub fn is_slant(
        &self,
        samples: u32,
        seed: u64,
        tol: f64,
    ) -> Result<SlantVerdict, GeometryError> {
        let s = self.require_structure()?;
        let m = self.dim();

        // Coordinates of the complement of ξ within h (everything when ξ is
        // not tangent; one dimension less when it is).
        let xi_coords = self.basis.transpose() * (self.metric.gram() * &s.xi);
        let xi_normal = &s.xi - &self.basis * &xi_coords;
        let xi_tangent = linalg::g_norm(self.metric.gram(), &xi_normal)
            <= tol * self.metric.norm(&s.xi).max(1.0);
        let complement: DMatrix<f64> = if xi_tangent {
            let row = DMatrix::from_fn(1, m, |_, j| xi_coords[j]);
            linalg::kernel(&row)
        } else {
            DMatrix::identity(m, m)
        };
        if complement.ncols() == 0 {
            return Ok(SlantVerdict::DegenerateAllUndefined);
        }

        // φ restricted to the complement directions; all zero means the
        // angle is undefined everywhere.
        let mut phi_scale = 0.0f64;
        for c in 0..complement.ncols() {
            let u = &self.basis * DVector::from(complement.column(c).into_owned());
            phi_scale = phi_scale.max(self.metric.norm(&(&s.phi * u)));
        }
        if phi_scale <= tol {
            return Ok(SlantVerdict::DegenerateAllUndefined);
        }

        let psi = self.psi_matrix()?;
        let q = &psi * &psi;
        let restricted = complement.transpose() * &q * &complement;
        let sym = 0.5 * (&restricted + restricted.transpose());
        let eigen = SymmetricEigen::new(sym);
        let vals = &eigen.eigenvalues;
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let spread = vals.iter().map(|l| (l - mean).abs()).fold(0.0, f64::max);

        let to_ambient =
            |coords: DVector<f64>| -> DVector<f64> { &self.basis * (&complement * coords) };

        if spread > tol {
            let (mut lo, mut hi) = (0usize, 0usize);
            for (idx, l) in vals.iter().enumerate() {
                if *l < vals[lo] {
                    lo = idx;
                }
                if *l > vals[hi] {
                    hi = idx;
                }
            }
            return Ok(SlantVerdict::NotSlant {
                first: to_ambient(eigen.eigenvectors.column(lo).into_owned()),
                second: to_ambient(eigen.eigenvectors.column(hi).into_owned()),
            });
        }

        let cos_sq = (-mean).clamp(0.0, 1.0);
        let theta = cos_sq.sqrt().acos();

        // Corroborate with sampled directions, comparing in the cos² domain
        // where the eigenvalue criterion lives.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut all_undefined = true;
        for _ in 0..samples {
            let coords = linalg::random_unit_vector(&mut rng, m);
            let x = &self.basis * coords;
            match self.wirtinger_angle(&x, tol)? {
                WirtingerAngle::Undefined => continue,
                WirtingerAngle::Angle(a) => {
                    all_undefined = false;
                    let sample_cos_sq = a.cos() * a.cos();
                    if (sample_cos_sq - cos_sq).abs() > tol.max(1e-12) {
                        let reference = to_ambient(eigen.eigenvectors.column(0).into_owned());
                        return Ok(SlantVerdict::NotSlant {
                            first: reference,
                            second: x,
                        });
                    }
                }
            }
        }
        if all_undefined && samples > 0 && phi_scale <= tol {
            return Ok(SlantVerdict::DegenerateAllUndefined);
        }
        Ok(SlantVerdict::Slant(theta))
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<(), GeometryError> {
        if v.len() != self.ambient_dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: self.ambient_dim(),
                got: v.len(),
            });
        }
        Ok(())
    }
}

fn cluster_eigenvalues(sorted: &[f64], gap: f64) -> Vec<(f64, usize)> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > gap {
            let slice = &sorted[start..i];
            let mean = slice.iter().sum::<f64>() / slice.len() as f64;
            clusters.push((mean, slice.len()));
            start = i;
        }
    }
    clusters
}

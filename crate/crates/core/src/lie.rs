//! Structure-constant representation of a finite-dimensional real Lie algebra.
//!
//! Constants are stored for index pairs i < j only and reflected on access,
//! so the bracket is antisymmetric by construction rather than by tolerance.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::GeometryError;
use crate::linalg;
use crate::metric::MetricLieAlgebra;

/// One sparse structure-constant entry: `[e_i, e_j]` gains `coeff`·e_k, with i < j.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: f64,
}

impl BracketEntry {
    pub fn new(i: usize, j: usize, k: usize, coeff: f64) -> Self {
        BracketEntry { i, j, k, coeff }
    }
}

/// A real Lie algebra given by its bracket table on a fixed basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    /// `pairs[p]` holds C[i][j][·] for the p-th pair (i, j) with i < j.
    pairs: Vec<DVector<f64>>,
    labels: Vec<String>,
}

/// Result of the lower-central-series length computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent,
}

/// Verdict of the nonsingularity test (Def of nonsingular 2-step algebras).
///
/// Surjectivity of ad X onto the center for every nonzero X in the orthogonal
/// complement is a statement over a continuum; a finite run can certify
/// failure (witness) but only sample success. The verdict is exact when the
/// complement is a line.
#[derive(Debug, Clone, PartialEq)]
pub enum NonsingularVerdict {
    Nonsingular,
    ProbablyNonsingular,
    SingularWitness(DVector<f64>),
}

impl LieAlgebra {
    /// Build from sparse entries; every entry must have i < j and indices < dim.
    pub fn new(dim: usize, entries: &[BracketEntry]) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::InvalidParameter(
                "algebra dimension must be positive".into(),
            ));
        }
        let mut pairs = vec![DVector::zeros(dim); dim * (dim - 1) / 2];
        for e in entries {
            if e.i >= e.j {
                return Err(GeometryError::InvalidBracketEntry { i: e.i, j: e.j });
            }
            for idx in [e.i, e.j, e.k] {
                if idx >= dim {
                    return Err(GeometryError::IndexOutOfRange { index: idx, dim });
                }
            }
            pairs[pair_index(dim, e.i, e.j)][e.k] += e.coeff;
        }
        let labels = (1..=dim).map(|i| format!("e{i}")).collect();
        Ok(LieAlgebra { dim, pairs, labels })
    }

    /// Build from a dense rank-3 tensor accessor, antisymmetrizing over (i, j).
    pub fn from_dense<F>(dim: usize, c: F) -> Result<Self, GeometryError>
    where
        F: Fn(usize, usize, usize) -> f64,
    {
        let mut entries = Vec::new();
        for i in 0..dim {
            for j in (i + 1)..dim {
                for k in 0..dim {
                    let v = 0.5 * (c(i, j, k) - c(j, i, k));
                    if v != 0.0 {
                        entries.push(BracketEntry::new(i, j, k, v));
                    }
                }
            }
        }
        LieAlgebra::new(dim, &entries)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GeometryError> {
        if labels.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Structure constant `C[i][j][k]`, reflected from the i < j storage.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.pairs[pair_index(self.dim, i, j)][k],
            Ordering::Greater => -self.pairs[pair_index(self.dim, j, i)][k],
            Ordering::Equal => 0.0,
        }
    }

    /// Nonzero stored entries as (i, j, k, coeff) with i < j.
    pub fn entries(&self) -> Vec<BracketEntry> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let col = &self.pairs[pair_index(self.dim, i, j)];
                for k in 0..self.dim {
                    if col[k] != 0.0 {
                        out.push(BracketEntry::new(i, j, k, col[k]));
                    }
                }
            }
        }
        out
    }

    /// Largest `|C[i][j][k]|`.
    pub fn max_constant(&self) -> f64 {
        self.pairs
            .iter()
            .map(linalg::inf_norm_vec)
            .fold(0.0, f64::max)
    }

    /// Same algebra expressed in the rescaled basis f = s·e (constants scale by s).
    pub fn rescaled(&self, s: f64) -> LieAlgebra {
        LieAlgebra {
            dim: self.dim,
            pairs: self.pairs.iter().map(|p| p * s).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn basis_vector(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    /// Bilinear bracket `[x, y] = Σ x_i y_j C[i][j][·]`.
    pub fn bracket(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
    ) -> Result<DVector<f64>, GeometryError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let w = x[i] * y[j] - x[j] * y[i];
                if w != 0.0 {
                    out += w * &self.pairs[pair_index(self.dim, i, j)];
                }
            }
        }
        Ok(out)
    }

    /// Bracket of two basis vectors, `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> DVector<f64> {
        use std::cmp::Ordering;
        match i.cmp(&j) {
            Ordering::Less => self.pairs[pair_index(self.dim, i, j)].clone(),
            Ordering::Greater => -self.pairs[pair_index(self.dim, j, i)].clone(),
            Ordering::Equal => DVector::zeros(self.dim),
        }
    }

    /// Max over basis triples of `‖[e_i,[e_j,e_k]] + [e_k,[e_i,e_j]] + [e_j,[e_k,e_i]]‖∞`.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let ei = self.basis_vector(i);
                    let ej = self.basis_vector(j);
                    let ek = self.basis_vector(k);
                    let t1 = self.bracket(&ei, &self.bracket_basis(j, k)).unwrap();
                    let t2 = self.bracket(&ek, &self.bracket_basis(i, j)).unwrap();
                    let t3 = self.bracket(&ej, &self.bracket_basis(k, i)).unwrap();
                    worst = worst.max(linalg::inf_norm_vec(&(t1 + t2 + t3)));
                }
            }
        }
        worst
    }

    /// Matrix of ad x : y ↦ `[x, y]` in the basis.
    pub fn ad_matrix(&self, x: &DVector<f64>) -> Result<DMatrix<f64>, GeometryError> {
        self.check_len(x)?;
        let n = self.dim;
        let mut out = DMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.bracket(x, &self.basis_vector(j))?;
            out.set_column(j, &col);
        }
        Ok(out)
    }

    /// Terms g⁰ ⊇ g¹ ⊇ … of the lower central series, `gⁱ = [g, g^{i-1}]`,
    /// stopping when the dimension stabilizes (the stabilized repeat is dropped).
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let n = self.dim;
        let mut series = vec![Subspace::full(n)];
        loop {
            let prev = series.last().unwrap();
            if prev.dim() == 0 {
                break;
            }
            let mut cols = Vec::new();
            for a in 0..n {
                let ea = self.basis_vector(a);
                for c in 0..prev.dim() {
                    let v: DVector<f64> = prev.basis().column(c).into_owned();
                    cols.push(self.bracket(&ea, &v).unwrap());
                }
            }
            let stacked = DMatrix::from_columns(&cols);
            let next = Subspace::from_span(n, &stacked);
            if next.dim() == prev.dim() {
                break;
            }
            let stop = next.dim() == 0;
            series.push(next);
            if stop {
                break;
            }
        }
        series
    }

    /// Smallest n with gⁿ = 0, or NotNilpotent when the series stabilizes above 0.
    pub fn nilpotency_class(&self) -> Nilpotency {
        let series = self.lower_central_series();
        let last = series.last().unwrap();
        if last.dim() == 0 {
            Nilpotency::Class(series.len() - 1)
        } else {
            Nilpotency::NotNilpotent
        }
    }

    /// True iff g¹ ≠ 0 and g² = 0; abelian algebras are not 2-step.
    pub fn is_two_step(&self) -> bool {
        self.nilpotency_class() == Nilpotency::Class(2)
    }

    /// Null space of the stacked maps x ↦ `[x, e_j]`; Euclidean-orthonormal basis.
    pub fn center(&self) -> Subspace {
        let n = self.dim;
        let mut stacked = DMatrix::zeros(n * n, n);
        for j in 0..n {
            for k in 0..n {
                for i in 0..n {
                    stacked[(j * n + k, i)] = self.constant(i, j, k);
                }
            }
        }
        Subspace {
            ambient_dim: n,
            basis: linalg::kernel(&stacked),
        }
    }

    /// Three-valued surjectivity test of ad X : g → Z(g) over X ∈ Z⊥(g) \ {0}.
    ///
    /// Every G-orthonormal basis vector of Z⊥(g) is tested deterministically,
    /// then `samples` random unit directions drawn from `seed`. A rank
    /// deficiency yields a witness certificate; an all-pass run is conclusive
    /// only when Z⊥(g) is one-dimensional.
    pub fn is_nonsingular(
        &self,
        metric: &MetricLieAlgebra,
        samples: u32,
        seed: u64,
    ) -> Result<NonsingularVerdict, GeometryError> {
        if !self.is_two_step() {
            return Err(GeometryError::NotTwoStep);
        }
        let (center, complement) = metric.center_perp();
        let zdim = center.dim();
        let cdim = complement.dim();

        let test = |x: &DVector<f64>| -> Result<bool, GeometryError> {
            let ad = self.ad_matrix(x)?;
            let rank = {
                let svd = ad.svd(false, false);
                let tol = linalg::rank_tolerance(svd.singular_values.max());
                svd.singular_values.iter().filter(|s| **s > tol).count()
            };
            Ok(rank >= zdim)
        };

        for c in 0..cdim {
            let x: DVector<f64> = complement.basis().column(c).into_owned();
            if !test(&x)? {
                return Ok(NonsingularVerdict::SingularWitness(x));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let coords = linalg::random_unit_vector(&mut rng, cdim);
            let x = complement.basis() * coords;
            if !test(&x)? {
                return Ok(NonsingularVerdict::SingularWitness(x));
            }
        }
        if cdim == 1 {
            Ok(NonsingularVerdict::Nonsingular)
        } else {
            Ok(NonsingularVerdict::ProbablyNonsingular)
        }
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<(), GeometryError> {
        if v.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// A linear subspace of R^n carried by an explicit basis matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    /// n×m matrix with orthonormal columns spanning the subspace.
    basis: DMatrix<f64>,
}

impl Subspace {
    pub fn full(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: DMatrix::identity(n, n),
        }
    }

    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: DMatrix::zeros(n, 0),
        }
    }

    /// Span of the given columns; rank decided by singular values.
    pub fn from_span(n: usize, cols: &DMatrix<f64>) -> Self {
        Subspace {
            ambient_dim: n,
            basis: linalg::column_span(cols),
        }
    }

    pub fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        Subspace {
            ambient_dim: basis.nrows(),
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Euclidean distance from v to the subspace (basis assumed orthonormal).
    pub fn distance(&self, v: &DVector<f64>) -> f64 {
        if self.dim() == 0 {
            return v.norm();
        }
        let coords = self.basis.transpose() * v;
        (v - &self.basis * coords).norm()
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.distance(v) <= tol
    }
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

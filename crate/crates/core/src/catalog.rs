//! Built-in example algebras, metrics, structures, and subalgebras used
//! throughout tests, docs, and acceptance runs.

use nalgebra::{DMatrix, DVector};

use crate::contact::AlmostContactStructure;
use crate::error::GeometryError;
use crate::lie::{BracketEntry, LieAlgebra};
use crate::metric::MetricLieAlgebra;

/// A named metric Lie algebra bundled with validated structures and raw
/// subalgebra bases.
#[derive(Debug, Clone)]
pub struct NamedExample {
    pub name: String,
    pub metric: MetricLieAlgebra,
    pub structures: Vec<(String, AlmostContactStructure)>,
    pub subalgebras: Vec<(String, DMatrix<f64>)>,
}

impl NamedExample {
    pub fn algebra(&self) -> &LieAlgebra {
        self.metric.algebra()
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }
}

/// Rotation-block φ on consecutive basis pairs with ξ the last basis vector;
/// the standard structure on an odd-dimensional space with identity metric.
pub fn standard_structure(n: usize) -> AlmostContactStructure {
    assert!(n % 2 == 1, "standard structure needs odd dimension");
    let mut phi = DMatrix::zeros(n, n);
    for b in 0..n / 2 {
        phi[(2 * b + 1, 2 * b)] = 1.0;
        phi[(2 * b, 2 * b + 1)] = -1.0;
    }
    let mut xi = DVector::zeros(n);
    xi[n - 1] = 1.0;
    AlmostContactStructure::new(phi, xi).expect("square matrix matches vector length")
}

fn basis_columns(n: usize, cols: &[Vec<(usize, f64)>]) -> DMatrix<f64> {
    let vecs: Vec<DVector<f64>> = cols
        .iter()
        .map(|entries| {
            let mut v = DVector::zeros(n);
            for (idx, val) in entries {
                v[*idx] = *val;
            }
            v
        })
        .collect();
    DMatrix::from_columns(&vecs)
}

/// Heisenberg-type algebra of dimension 2k+1 with brackets
/// `[e_{2i−1}, e_{2i}] = c·e_{2k+1}`, identity metric, and the standard
/// structure. c = 2 lands exactly on the Sasakian normalization.
pub fn heisenberg(k: usize, c: f64) -> Result<NamedExample, GeometryError> {
    if k == 0 {
        return Err(GeometryError::InvalidParameter(
            "heisenberg needs k >= 1".into(),
        ));
    }
    if c == 0.0 {
        return Err(GeometryError::InvalidParameter(
            "heisenberg needs a nonzero bracket constant".into(),
        ));
    }
    let n = 2 * k + 1;
    let entries: Vec<BracketEntry> = (0..k)
        .map(|i| BracketEntry::new(2 * i, 2 * i + 1, n - 1, c))
        .collect();
    let algebra = LieAlgebra::new(n, &entries)?;
    let metric = MetricLieAlgebra::with_identity_metric(algebra)?;
    let mut subalgebras = vec![
        (
            "center-line".to_string(),
            basis_columns(n, &[vec![(n - 1, 1.0)]]),
        ),
        (
            "e1-center-plane".to_string(),
            basis_columns(n, &[vec![(0, 1.0)], vec![(n - 1, 1.0)]]),
        ),
        (
            // Not closed under the bracket; kept for exploring the Gauss split.
            "e1-e2-plane".to_string(),
            basis_columns(n, &[vec![(0, 1.0)], vec![(1, 1.0)]]),
        ),
    ];
    if k >= 2 {
        subalgebras.push((
            "e1-e3-plane".to_string(),
            basis_columns(n, &[vec![(0, 1.0)], vec![(2, 1.0)]]),
        ));
    }
    Ok(NamedExample {
        name: format!("heisenberg({k},{c})"),
        metric,
        structures: vec![("standard".to_string(), standard_structure(n))],
        subalgebras,
    })
}

/// Abelian algebra with identity metric; odd dimensions carry the standard
/// two-block structure and a family of slant planes.
pub fn abelian(n: usize) -> Result<NamedExample, GeometryError> {
    let algebra = LieAlgebra::new(n, &[])?;
    let metric = MetricLieAlgebra::with_identity_metric(algebra)?;
    let structures = if n % 2 == 1 {
        vec![("standard".to_string(), standard_structure(n))]
    } else {
        Vec::new()
    };
    let mut subalgebras = Vec::new();
    if n >= 5 && n % 2 == 1 {
        let slant_plane = |theta: f64| {
            basis_columns(
                n,
                &[vec![(0, 1.0)], vec![(1, theta.cos()), (3, theta.sin())]],
            )
        };
        subalgebras.push(("phi-invariant-plane".to_string(), slant_plane(0.0)));
        subalgebras.push((
            "slant-pi4-plane".to_string(),
            slant_plane(std::f64::consts::FRAC_PI_4),
        ));
        subalgebras.push((
            "totally-real-plane".to_string(),
            slant_plane(std::f64::consts::FRAC_PI_2),
        ));
        subalgebras.push((
            "mixed-3plane".to_string(),
            basis_columns(n, &[vec![(0, 1.0)], vec![(1, 1.0)], vec![(2, 1.0)]]),
        ));
        subalgebras.push((
            "xi-line".to_string(),
            basis_columns(n, &[vec![(n - 1, 1.0)]]),
        ));
    }
    Ok(NamedExample {
        name: format!("abelian({n})"),
        metric,
        structures,
        subalgebras,
    })
}

/// h3 ⊕ R: 2-step with two-dimensional center, the canonical singular case.
pub fn singular_two_step() -> NamedExample {
    let algebra = LieAlgebra::new(4, &[BracketEntry::new(0, 1, 2, 1.0)]).expect("valid table");
    let metric = MetricLieAlgebra::with_identity_metric(algebra).expect("identity metric");
    NamedExample {
        name: "singular_two_step".to_string(),
        metric,
        structures: Vec::new(),
        subalgebras: vec![(
            "center-plane".to_string(),
            basis_columns(4, &[vec![(2, 1.0)], vec![(3, 1.0)]]),
        )],
    }
}

/// The 4-dimensional filiform algebra `[e1,e2]=e3`, `[e1,e3]=e4`: 3-step, used as
/// the control showing the half-bracket formula genuinely needs 2-step.
pub fn filiform4() -> NamedExample {
    let algebra = LieAlgebra::new(
        4,
        &[
            BracketEntry::new(0, 1, 2, 1.0),
            BracketEntry::new(0, 2, 3, 1.0),
        ],
    )
    .expect("valid table");
    let metric = MetricLieAlgebra::with_identity_metric(algebra).expect("identity metric");
    NamedExample {
        name: "filiform4".to_string(),
        metric,
        structures: Vec::new(),
        subalgebras: vec![(
            "abelian-ideal".to_string(),
            basis_columns(4, &[vec![(1, 1.0)], vec![(2, 1.0)], vec![(3, 1.0)]]),
        )],
    }
}

/// A probe structure on singular_two_step with ξ = e4 sitting inside the
/// center. It does not satisfy the contact axioms (the dimension is even);
/// it exists to demonstrate the ξ-in-center violation in the §-level checks.
pub fn central_xi_probe() -> AlmostContactStructure {
    let mut phi = DMatrix::zeros(4, 4);
    phi[(1, 0)] = 1.0;
    phi[(0, 1)] = -1.0;
    let mut xi = DVector::zeros(4);
    xi[3] = 1.0;
    AlmostContactStructure::new(phi, xi).expect("square matrix matches vector length")
}

/// All CLI-addressable examples, keyed by name.
pub fn registry() -> Vec<(&'static str, NamedExample)> {
    vec![
        ("h3", heisenberg(1, 1.0).unwrap()),
        ("h3-sasakian", heisenberg(1, 2.0).unwrap()),
        ("h3-c3", heisenberg(1, 3.0).unwrap()),
        ("h5", heisenberg(2, 1.0).unwrap()),
        ("abelian3", abelian(3).unwrap()),
        ("abelian4", abelian(4).unwrap()),
        ("abelian5", abelian(5).unwrap()),
        ("abelian6", abelian(6).unwrap()),
        ("abelian7", abelian(7).unwrap()),
        ("singular-two-step", singular_two_step()),
        ("filiform4", filiform4()),
    ]
}

pub fn lookup(name: &str) -> Option<NamedExample> {
    registry()
        .into_iter()
        .find(|(key, _)| *key == name)
        .map(|(_, ex)| ex)
}

pub fn example_names() -> Vec<&'static str> {
    registry().into_iter().map(|(key, _)| key).collect()
}

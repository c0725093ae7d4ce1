//! C-fields: a connection together with a global 3-form.

use serde::{Deserialize, Serialize};

use super::connection::LatticeConnection;
use super::domain::GridDomain;
use super::functional::{cs_explicit, relative_cs, CsOptions, InvariantPolynomial};
use crate::circle::CircleValue;
use crate::error::{Error, Result};
use crate::form::{subset_index, FormField};
use crate::transgression::DifferentialCharacter;

/// Tolerance for closedness and integrality of the curvature of a gauge character.
pub const PERIOD_TOL: f64 = 1e-6;
const PERIOD_GRID: usize = 16;

#[derive(Clone, Debug)]
pub struct CField<const N: usize> {
    connection: LatticeConnection<N>,
    c: FormField,
}

/// A coordinate 3-torus: the slice `x_axis = position` of a 4-torus, or the
/// whole domain of a 3-torus when `axis` is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestCycle {
    pub axis: Option<usize>,
    pub position: f64,
}

/// The standard test cycles on the unit torus of the given dimension.
pub fn coordinate_cycles(dim: usize) -> Vec<TestCycle> {
    match dim {
        3 => vec![TestCycle { axis: None, position: 0.0 }],
        _ => [(0, 0.0), (1, 0.25), (2, 0.5), (3, 0.75), (0, 0.5)]
            .into_iter()
            .filter(|(a, _)| *a < dim)
            .map(|(a, p)| TestCycle { axis: Some(a), position: p })
            .collect(),
    }
}

/// `∫` of a 3-form over a test cycle, oriented by the remaining coordinates
/// in increasing order.
pub fn integrate_over_cycle(form: &FormField, cycle: &TestCycle, grid: usize) -> Result<f64> {
    let dim = form.dim();
    if form.degree() != 3 {
        return Err(Error::Structure("test cycles carry 3-forms".into()));
    }
    match cycle.axis {
        None if dim == 3 => Ok(GridDomain::torus(3).integrate(grid, |x| form.coefficients(x)[0])),
        Some(axis) if axis < dim && dim == 4 => {
            let rest: Vec<usize> = (0..4).filter(|&i| i != axis).collect();
            let idx = subset_index(4, &rest);
            Ok(GridDomain::torus(3).integrate(grid, |y| {
                let mut x = y.to_vec();
                x.insert(axis, cycle.position);
                form.coefficients(&x)[idx]
            }))
        }
        _ => Err(Error::Structure(format!("cycle {cycle:?} does not fit a {dim}-torus"))),
    }
}

impl<const N: usize> CField<N> {
    pub fn new(connection: LatticeConnection<N>, c: FormField) -> Result<Self> {
        if !connection.domain().is_torus() || !(3..=4).contains(&connection.dim()) {
            return Err(Error::Structure("C-fields live on a 3- or 4-torus".into()));
        }
        if c.degree() != 3 || c.dim() != connection.dim() {
            return Err(Error::Structure(format!(
                "C-field form must be a 3-form on dimension {}, got degree {} on dimension {}",
                connection.dim(),
                c.degree(),
                c.dim()
            )));
        }
        Ok(CField { connection, c })
    }

    pub fn connection(&self) -> &LatticeConnection<N> {
        &self.connection
    }

    pub fn form(&self) -> &FormField {
        &self.c
    }

    /// `CS(A|Σ) + ∫_Σ c mod 1`.
    pub fn holonomy(&self, cycle: &TestCycle, phi: &InvariantPolynomial, opts: &CsOptions) -> Result<CircleValue> {
        let restricted = match cycle.axis {
            None => self.connection.clone(),
            Some(axis) => self.connection.restrict(axis, cycle.position)?,
        };
        let cs = cs_explicit(&restricted, phi.level, opts)?;
        Ok(CircleValue::float(cs + integrate_over_cycle(&self.c, cycle, opts.grid)?))
    }
}

/// A gauge parameter `(α, D)`: a Lie-algebra valued 1-form and a degree-2
/// differential character, of which only the curvature enters.
#[derive(Clone, Debug)]
pub struct GaugeElement<const N: usize> {
    pub alpha: LatticeConnection<N>,
    pub character: Option<DifferentialCharacter>,
}

impl<const N: usize> GaugeElement<N> {
    pub fn identity(domain: GridDomain) -> Self {
        GaugeElement { alpha: LatticeConnection::zero(domain), character: None }
    }
}

fn check_integral_curvature(d: &DifferentialCharacter, dim: usize) -> Result<()> {
    let h = d.curvature();
    if d.degree() != 2 || h.dim() != dim {
        return Err(Error::Structure(format!("gauge character must have degree 2 on dimension {dim}")));
    }
    let domain = GridDomain::torus(dim);
    if dim > 3 {
        let dh = h.exterior_derivative();
        for x in domain.sample(20, 0x5eed) {
            let worst = dh.coefficients(&x).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if worst > PERIOD_TOL {
                return Err(Error::Precondition(format!("curvature of the gauge character is not closed at {x:?}")));
            }
        }
    }
    for cycle in coordinate_cycles(dim).into_iter().take(dim.max(1)) {
        let p = integrate_over_cycle(h, &cycle, PERIOD_GRID)?;
        if (p - p.round()).abs() > PERIOD_TOL {
            return Err(Error::Precondition(format!("curvature of the gauge character has period {p} on {cycle:?}")));
        }
    }
    Ok(())
}

/// `(α, D)·(A, c) = (A + α, c + CS(A, A + α) + curv D)`.
pub fn cfield_act<const N: usize>(g: &GaugeElement<N>, cf: &CField<N>, phi: &InvariantPolynomial) -> Result<CField<N>> {
    let a2 = cf.connection.add(&g.alpha)?;
    let mut c = cf.c.add(&relative_cs(&cf.connection, &a2, phi)?);
    if let Some(d) = &g.character {
        check_integral_curvature(d, cf.connection.dim())?;
        c = c.add(d.curvature());
    }
    CField::new(a2, c)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CFieldEntry {
    pub cycle: TestCycle,
    pub original: f64,
    pub acted: f64,
    pub defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CFieldReport {
    pub entries: Vec<CFieldEntry>,
    pub max_defect: f64,
    pub passed: bool,
}

/// Compare the degree-3 holonomies of two C-fields on the given cycles.
pub fn cfield_equivalence_check<const N: usize>(
    first: &CField<N>,
    second: &CField<N>,
    cycles: &[TestCycle],
    phi: &InvariantPolynomial,
    opts: &CsOptions,
    tol: f64,
) -> Result<CFieldReport> {
    let mut entries = Vec::new();
    for cycle in cycles {
        let (a, b) = (first.holonomy(cycle, phi, opts)?, second.holonomy(cycle, phi, opts)?);
        entries.push(CFieldEntry { cycle: *cycle, original: a.angle(), acted: b.angle(), defect: a.distance(&b) });
    }
    let max_defect = entries.iter().map(|e| e.defect).fold(0.0, f64::max);
    Ok(CFieldReport { entries, max_defect, passed: max_defect <= tol })
}

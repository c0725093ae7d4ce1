//! Named connection and gauge families for scenario files.
//!
//! ```json
//! {"family": "constant", "x": [0.3, 0, 0], "y": [0, 0.7, 0], "z": [0, 0, 0.4]}
//! {"family": "bump_degree", "w": 2}
//! {"family": "abelian_flux", "n": 1, "m": 2}
//! ```

use serde::{Deserialize, Serialize};

use super::connection::{constant_su2, monopole_pair, random_abelian, random_su2, LatticeConnection};
use super::domain::GridDomain;
use super::gauge::{abelian_winding, bump_degree, gauge_transform, GaugeTransformation};
use super::matrix::su2_exp;
use crate::error::{Error, Result};

pub const DEFAULT_BUMP_RADIUS: f64 = 0.4;

fn three() -> usize {
    3
}

fn one() -> i64 {
    1
}

fn bump_radius() -> f64 {
    DEFAULT_BUMP_RADIUS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConnectionDoc {
    /// The trivial `su(2)` connection on the unit torus.
    Flat {
        #[serde(default = "three")]
        dim: usize,
    },
    /// Constant `su(2)` connection `A_μ = i c_μ·σ` on the 3-torus.
    Constant { x: [f64; 3], y: [f64; 3], z: [f64; 3] },
    /// Monopoles of charges `n` and `m` on `S² × S²`.
    AbelianFlux {
        n: i64,
        #[serde(default = "one")]
        m: i64,
    },
    /// The pure gauge `g⁻¹dg` of the degree-`w` bump map.
    BumpDegree {
        w: i64,
        #[serde(default = "bump_radius")]
        radius: f64,
    },
    Random {
        seed: u64,
        amplitude: f64,
        #[serde(default = "three")]
        dim: usize,
    },
    RandomAbelian {
        seed: u64,
        amplitude: f64,
        #[serde(default = "three")]
        dim: usize,
    },
}

/// A connection of rank 1 or 2.
#[derive(Clone, Debug)]
pub enum AnyConnection {
    Abelian(LatticeConnection<1>),
    Su2(LatticeConnection<2>),
}

impl AnyConnection {
    pub fn dim(&self) -> usize {
        match self {
            AnyConnection::Abelian(a) => a.dim(),
            AnyConnection::Su2(a) => a.dim(),
        }
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius < 0.5) {
        return Err(Error::Parameter(format!("bump radius {radius} must lie in (0, 0.5)")));
    }
    Ok(())
}

impl ConnectionDoc {
    pub fn build(&self) -> Result<AnyConnection> {
        Ok(match *self {
            ConnectionDoc::Flat { dim } => AnyConnection::Su2(LatticeConnection::zero(GridDomain::torus(dim))),
            ConnectionDoc::Constant { x, y, z } => AnyConnection::Su2(constant_su2(&[x, y, z])),
            ConnectionDoc::AbelianFlux { n, m } => AnyConnection::Abelian(monopole_pair(n, m)),
            ConnectionDoc::BumpDegree { w, radius } => {
                check_radius(radius)?;
                let g = bump_degree(w, radius);
                AnyConnection::Su2(gauge_transform(&LatticeConnection::zero(GridDomain::torus(3)), &g)?)
            }
            ConnectionDoc::Random { seed, amplitude, dim } => AnyConnection::Su2(random_su2(dim, seed, amplitude)),
            ConnectionDoc::RandomAbelian { seed, amplitude, dim } => AnyConnection::Abelian(random_abelian(dim, seed, amplitude)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum GaugeDoc {
    Identity,
    /// `exp(i c·σ)`.
    Constant {
        coeffs: [f64; 3],
    },
    BumpDegree {
        w: i64,
        #[serde(default = "bump_radius")]
        radius: f64,
    },
    /// `exp(2πi·w·x_axis·diag(1, −1))`.
    AbelianWinding {
        w: i64,
        axis: usize,
    },
}

impl GaugeDoc {
    /// The transformation on the 3-torus.
    pub fn build(&self) -> Result<GaugeTransformation<2>> {
        let torus = GridDomain::torus(3);
        Ok(match *self {
            GaugeDoc::Identity => GaugeTransformation::identity(torus),
            GaugeDoc::Constant { coeffs } => GaugeTransformation::constant(torus, su2_exp(coeffs)),
            GaugeDoc::BumpDegree { w, radius } => {
                check_radius(radius)?;
                bump_degree(w, radius)
            }
            GaugeDoc::AbelianWinding { w, axis } => {
                if axis >= 3 {
                    return Err(Error::Parameter(format!("axis {axis} out of range")));
                }
                abelian_winding(3, w, axis)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_parse_and_build() {
        let docs = [
            r#"{"family": "flat"}"#,
            r#"{"family": "constant", "x": [0.3, 0, 0], "y": [0, 0.7, 0], "z": [0, 0, 0.4]}"#,
            r#"{"family": "abelian_flux", "n": 2}"#,
            r#"{"family": "bump_degree", "w": -1}"#,
            r#"{"family": "random", "seed": 3, "amplitude": 0.5, "dim": 4}"#,
        ];
        let dims: Vec<usize> = docs.iter().map(|d| serde_json::from_str::<ConnectionDoc>(d).unwrap().build().unwrap().dim()).collect();
        assert_eq!(dims, vec![3, 3, 4, 3, 4]);
        assert!(matches!(
            serde_json::from_str::<ConnectionDoc>(r#"{"family": "abelian_flux", "n": 1}"#).unwrap().build().unwrap(),
            AnyConnection::Abelian(_)
        ));
        assert!(serde_json::from_str::<ConnectionDoc>(r#"{"family": "instanton"}"#).is_err());
        let bad = serde_json::from_str::<ConnectionDoc>(r#"{"family": "bump_degree", "w": 1, "radius": 0.7}"#).unwrap();
        assert!(matches!(bad.build(), Err(Error::Parameter(_))));
    }

    #[test]
    fn gauge_families() {
        for d in [
            r#"{"family": "identity"}"#,
            r#"{"family": "constant", "coeffs": [0.1, 0.2, 0.3]}"#,
            r#"{"family": "bump_degree", "w": 2, "radius": 0.3}"#,
            r#"{"family": "abelian_winding", "w": 1, "axis": 2}"#,
        ] {
            let g = serde_json::from_str::<GaugeDoc>(d).unwrap().build().unwrap();
            g.check(10, 0).unwrap();
        }
        let bad = serde_json::from_str::<GaugeDoc>(r#"{"family": "abelian_winding", "w": 1, "axis": 3}"#).unwrap();
        assert!(bad.build().is_err());
    }
}

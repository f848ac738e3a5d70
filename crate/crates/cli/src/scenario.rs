use rayon::prelude::*;

use rsl_core::bounds::{evaluate, BoundOptions, BoundReport, EntropyOrientation, Framing, Quadrature};
use rsl_core::dynamics::{
    ChannelSpec, DissipatorConvention, OccupationConvention, ThermalParams, Trajectory,
};
use rsl_core::qcore::{DensityMatrix, HermitianOperator, DEFAULT_FLOOR};
use rsl_core::resources::{is_werner_family, separable_search, FreeStateOracle, SearchConfig};
use rsl_core::RslError;

use crate::config::{
    ConventionKind, FramingKind, OracleKind, OrientationKind, QuadratureKind, ScenarioConfig,
    ScenarioKind,
};
use crate::CliError;

#[derive(Clone, Debug)]
pub enum Dynamics {
    Channel(ChannelSpec<f64>),
    Unitary(HermitianOperator<f64>),
}

impl Dynamics {
    pub fn trajectory(&self, rho0: &DensityMatrix<f64>, tau: f64, points: usize) -> rsl_core::Result<Trajectory<f64>> {
        match self {
            Self::Channel(ch) => Trajectory::generate(ch, rho0, tau, points),
            Self::Unitary(h) => Trajectory::unitary(h, rho0, tau, points),
        }
    }
}

/// A configuration resolved into library objects.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub dynamics: Dynamics,
    pub initial: DensityMatrix<f64>,
    pub oracle: FreeStateOracle<f64>,
    pub options: BoundOptions<f64>,
    pub framing: FramingKind,
    pub grid_points: usize,
}

/// Oracle closest-state value against the numerical separable search at ρ₀.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparableCheck {
    pub oracle_value: f64,
    pub search_value: f64,
    pub gap: f64,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub scenario: &'static str,
    pub oracle: &'static str,
    pub reports: Vec<BoundReport<f64>>,
    pub separable: Option<SeparableCheck>,
}

fn convention<T: Default>(c: ConventionKind, as_written: T) -> T {
    match c {
        ConventionKind::Standard => T::default(),
        ConventionKind::AsWritten => as_written,
    }
}

impl Scenario {
    pub fn from_config(cfg: &ScenarioConfig) -> Result<Self, CliError> {
        cfg.validate()?;
        let gamma = cfg.gamma.unwrap_or_default();
        let k = cfg.k.unwrap_or_default();
        let dynamics = match cfg.scenario {
            ScenarioKind::Dephasing => Dynamics::Channel(ChannelSpec::Dephasing { gamma }),
            ScenarioKind::DephasingNm => Dynamics::Channel(ChannelSpec::DephasingNonMonotonic { gamma, k }),
            ScenarioKind::Depolarising => Dynamics::Channel(ChannelSpec::Depolarising { gamma }),
            ScenarioKind::DepolarisingNm => Dynamics::Channel(ChannelSpec::DepolarisingNonMonotonic { gamma, k }),
            ScenarioKind::Thermal => {
                let mut p = ThermalParams::new(gamma, cfg.omega.unwrap_or_default(), cfg.beta.unwrap_or_default());
                p.occupation = convention(cfg.occupation, OccupationConvention::AsWritten);
                p.dissipator = convention(cfg.dissipator, DissipatorConvention::AsWritten);
                Dynamics::Channel(ChannelSpec::Thermal(p))
            }
            ScenarioKind::Custom => Dynamics::Unitary(cfg.hamiltonian()?.expect("validated")),
        };
        let initial = cfg.initial_state()?;
        let kind = cfg.oracle.unwrap_or(match cfg.scenario {
            ScenarioKind::Thermal => OracleKind::Gibbs,
            ScenarioKind::Custom => OracleKind::Incoherent,
            _ if initial.dim() == 4 && is_werner_family(&initial) => OracleKind::WernerSeparable,
            _ => OracleKind::Incoherent,
        });
        let oracle = match kind {
            OracleKind::Incoherent => FreeStateOracle::Incoherent,
            OracleKind::WernerSeparable => FreeStateOracle::WernerSeparable,
            OracleKind::Gibbs => {
                let (w, b) = (cfg.omega.unwrap_or_default(), cfg.beta.unwrap_or_default());
                FreeStateOracle::gibbs(w, b).map_err(|e| CliError::Usage(format!("oracle: {e}")))?
            }
            OracleKind::Fixed => FreeStateOracle::FixedState(cfg.free_state()?.expect("validated")),
        };
        if !oracle.supports(&initial) {
            return Err(CliError::Usage(format!(
                "oracle: {} does not support the initial state",
                oracle.name()
            )));
        }
        let options = BoundOptions {
            floor: cfg.floor,
            epsilon: cfg.epsilon,
            quadrature: match cfg.quadrature {
                QuadratureKind::Increment => Quadrature::Increment,
                QuadratureKind::Trapezoid => Quadrature::Trapezoid,
                QuadratureKind::Simpson => Quadrature::Simpson,
            },
            orientation: match cfg.orientation {
                OrientationKind::Flipped => EntropyOrientation::Flipped,
                OrientationKind::Literal => EntropyOrientation::Literal,
            },
        };
        Ok(Self {
            name: scenario_name(cfg.scenario),
            dynamics,
            initial,
            oracle,
            options,
            framing: cfg.framing,
            grid_points: cfg.grid_points,
        })
    }

    /// Every bound at one duration.
    pub fn report(&self, tau: f64) -> rsl_core::Result<BoundReport<f64>> {
        let traj = self.dynamics.trajectory(&self.initial, tau, self.grid_points)?;
        let framing = match self.framing {
            FramingKind::None => Framing::None,
            FramingKind::Generation => Framing::Generation(self.oracle.closest_free(traj.initial_state())?),
            FramingKind::Degradation => Framing::Degradation(self.oracle.closest_free(traj.final_state())?),
            FramingKind::DegradationNearFree => {
                Framing::NearFreeDegradation(self.oracle.closest_free(traj.final_state())?)
            }
        };
        evaluate(&traj, &self.oracle, &self.options, &framing)
    }
}

pub fn scenario_name(kind: ScenarioKind) -> &'static str {
    match kind {
        ScenarioKind::Dephasing => "dephasing",
        ScenarioKind::DephasingNm => "dephasing-nm",
        ScenarioKind::Depolarising => "depolarising",
        ScenarioKind::DepolarisingNm => "depolarising-nm",
        ScenarioKind::Thermal => "thermal",
        ScenarioKind::Custom => "custom",
    }
}

/// One report per entry of `tau_list`, computed concurrently, in input order.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioRun, CliError> {
    let scenario = Scenario::from_config(cfg)?;
    let reports = cfg
        .tau_list
        .par_iter()
        .map(|&tau| {
            scenario.report(tau).map_err(|source| CliError::Scenario {
                scenario: scenario.name,
                tau,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let separable = if cfg.separable_check {
        Some(separable_check(&scenario, cfg.seed)?)
    } else {
        None
    };
    Ok(ScenarioRun {
        scenario: scenario.name,
        oracle: scenario.oracle.name(),
        reports,
        separable,
    })
}

fn separable_check(scenario: &Scenario, seed: u64) -> Result<SeparableCheck, CliError> {
    let rho = &scenario.initial;
    if rho.dim() != 4 {
        return Err(CliError::Usage("separable_check: needs a two-qubit initial state".into()));
    }
    let wrap = |source: RslError| CliError::Scenario {
        scenario: scenario.name,
        tau: 0.0,
        source,
    };
    let oracle_value = scenario.oracle.resource_measure(rho, DEFAULT_FLOOR).map_err(wrap)?;
    let cfg = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    let r = separable_search(rho, &cfg).map_err(wrap)?;
    Ok(SeparableCheck {
        oracle_value,
        search_value: r.value,
        gap: r.gap,
        converged: r.converged,
    })
}

//! Work accounting for cycles that exchange entropy with a thermal bath.
//!
//! Over a closed cycle the internal-energy term `-∮ d Tr(ρH)` vanishes, so the
//! only contribution is the isothermal one: `W = k_B T ln2 ΔS` with `ΔS` in
//! bits. Natural units set `k_B T ln2 = 1` at the context temperature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::DensityMatrix;

/// CODATA 2018 exact value, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    /// One energy unit per bit at the context temperature.
    #[default]
    Natural,
    /// Joules.
    Si,
}

impl Units {
    pub fn energy_label(self) -> &'static str {
        match self {
            Units::Natural => "kT_ln2",
            Units::Si => "J",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalContext {
    temperature: f64,
    units: Units,
}

impl ThermalContext {
    pub fn new(temperature: f64, units: Units) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return Err(Error::argument(format!(
                "temperature must be positive and finite, got {temperature}"
            )));
        }
        Ok(Self { temperature, units })
    }

    /// Natural units at a nominal 300 K.
    pub fn natural() -> Self {
        Self {
            temperature: 300.0,
            units: Units::Natural,
        }
    }

    pub fn si(temperature: f64) -> Result<Self> {
        Self::new(temperature, Units::Si)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn units(&self) -> Units {
        self.units
    }

    /// Energy of one bit: `k_B T ln2` in the context's units.
    pub fn unit_factor(&self) -> f64 {
        match self.units {
            Units::Natural => 1.0,
            Units::Si => BOLTZMANN * std::f64::consts::LN_2 * self.temperature,
        }
    }

    /// Energy equivalent of `bits`.
    pub fn energy(&self, bits: f64) -> f64 {
        self.unit_factor() * bits
    }
}

impl Default for ThermalContext {
    fn default() -> Self {
        Self::natural()
    }
}

/// Work obtained (positive) or consumed (negative) by a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorkReport {
    pub work: f64,
    /// Entropy gained by the fuel, bits.
    pub entropy_delta: f64,
    /// Landauer cost of restoring the fuel's entropy, same units as `work`.
    pub landauer_reset: f64,
    /// `-∮ d Tr(ρH)`; identically zero over a closed cycle.
    pub hamiltonian_term: f64,
    pub units: Units,
    pub temperature: f64,
}

impl WorkReport {
    pub fn zero(ctx: &ThermalContext) -> Self {
        cycle_work(0.0, ctx)
    }

    pub fn work_bits(&self, ctx: &ThermalContext) -> f64 {
        self.work / ctx.unit_factor()
    }
}

/// `W = k_B ln2 T ΔS`.
pub fn cycle_work(entropy_delta: f64, ctx: &ThermalContext) -> WorkReport {
    WorkReport {
        work: ctx.energy(entropy_delta),
        entropy_delta,
        landauer_reset: ctx.energy(entropy_delta.abs()),
        hamiltonian_term: 0.0,
        units: ctx.units(),
        temperature: ctx.temperature(),
    }
}

/// Work from depolarizing `rho` completely: `k_B T ln2 (log2 d - S(ρ))`.
pub fn extractable_work(rho: &DensityMatrix, ctx: &ThermalContext) -> Result<WorkReport> {
    let deficit = rho.capacity_bits() - rho.entropy()?;
    Ok(cycle_work(deficit, ctx))
}

/// Minimum work to erase `bits` of entropy.
pub fn landauer_reset_cost(bits: f64, ctx: &ThermalContext) -> Result<f64> {
    if bits < 0.0 || bits.is_nan() {
        return Err(Error::argument(format!(
            "cannot reset a negative number of bits ({bits})"
        )));
    }
    Ok(ctx.energy(bits))
}

/// Entropy shuttled by messenger qubits between a primary station at
/// `t_low` and a remote station at `t_high`.
///
/// Energies are in joules. When `t_low > t_high` the cycle runs in reverse and
/// the work per qubit is negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CarnotReport {
    pub t_low: f64,
    pub t_high: f64,
    pub work_per_qubit: f64,
    pub heat_from_hot: f64,
    pub efficiency: f64,
}

/// One bit pumped out at `t1` (primary station) and released at `t2` (remote station).
pub fn remote_carnot(t1: f64, t2: f64) -> Result<CarnotReport> {
    ThermalContext::si(t1)?;
    let remote = ThermalContext::si(t2)?;
    Ok(CarnotReport {
        t_low: t1,
        t_high: t2,
        work_per_qubit: BOLTZMANN * std::f64::consts::LN_2 * (t2 - t1),
        heat_from_hot: remote.unit_factor(),
        efficiency: 1.0 - t1 / t2,
    })
}

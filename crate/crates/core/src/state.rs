use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GfdError, Result};

/// Amplitudes must have unit norm within this tolerance when a state is
/// constructed from already-normalized data.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum System {
    Qubits { n: u32 },
    /// Spin-s system stored as 2s so half-integers stay exact.
    Spin { twice_s: u32 },
}

impl System {
    pub fn dim(&self) -> usize {
        match *self {
            System::Qubits { n } => 1usize << n,
            System::Spin { twice_s } => twice_s as usize + 1,
        }
    }
}

/// Dense pure state. Qubit `k` is bit `k` of the amplitude index; spin
/// amplitude `i` is the weight of |s, s - i>.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    system: System,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, system: System) -> Result<Self> {
        check_len(&amplitudes, system)?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(GfdError::Contract(format!("state norm {norm} is not 1")));
        }
        Ok(Self { amplitudes, system })
    }

    /// Normalizes the given vector; a zero vector is rejected.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>, system: System) -> Result<Self> {
        check_len(&amplitudes, system)?;
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(GfdError::Parameter("cannot normalize a zero vector".into()));
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Ok(Self { amplitudes, system })
    }

    pub fn basis(system: System, index: usize) -> Result<Self> {
        let d = system.dim();
        if index >= d {
            return Err(GfdError::Range(format!("basis index {index} >= dimension {d}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); d];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: amps, system })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn qubits(&self) -> Result<u32> {
        match self.system {
            System::Qubits { n } => Ok(n),
            System::Spin { .. } => Err(GfdError::SystemType("expected a qubit state, got a spin state".into())),
        }
    }

    pub fn twice_spin(&self) -> Result<u32> {
        match self.system {
            System::Spin { twice_s } => Ok(twice_s),
            System::Qubits { .. } => Err(GfdError::SystemType("expected a spin state, got a qubit state".into())),
        }
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amplitudes).sqrt()
    }

    /// <self|other>
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.system != other.system {
            return Err(GfdError::Size("inner product of states on different systems".into()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Tensor product with `other` placed on the higher qubits.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let (System::Qubits { n: a }, System::Qubits { n: b }) = (self.system, other.system) else {
            return Err(GfdError::SystemType("tensor products are defined for qubit states".into()));
        };
        if a + b > 30 {
            return Err(GfdError::capacity("dense qubit count", 30, (a + b) as u64));
        }
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for hi in &other.amplitudes {
            for lo in &self.amplitudes {
                amps.push(lo * hi);
            }
        }
        Ok(PureState { amplitudes: amps, system: System::Qubits { n: a + b } })
    }
}

fn check_len(amps: &[Complex64], system: System) -> Result<()> {
    if let System::Qubits { n } = system {
        if n == 0 || n > 30 {
            return Err(GfdError::Parameter(format!("qubit count {n} outside 1..=30 for a dense state")));
        }
    }
    if amps.len() != system.dim() {
        return Err(GfdError::Size(format!(
            "{} amplitudes for a system of dimension {}",
            amps.len(),
            system.dim()
        )));
    }
    Ok(())
}

pub(crate) fn norm_sqr(amps: &[Complex64]) -> f64 {
    crate::numeric::kahan_sum(amps.iter().map(|a| a.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_wrong_length_and_norm() {
        let sys = System::Qubits { n: 1 };
        assert!(matches!(PureState::new(vec![c(1.0)], sys), Err(GfdError::Size(_))));
        assert!(matches!(PureState::new(vec![c(1.0), c(1.0)], sys), Err(GfdError::Contract(_))));
        assert!(PureState::from_unnormalized(vec![c(1.0), c(1.0)], sys).is_ok());
        assert!(PureState::from_unnormalized(vec![c(0.0), c(0.0)], sys).is_err());
    }

    #[test]
    fn tensor_places_second_factor_high() {
        let zero = PureState::basis(System::Qubits { n: 1 }, 0).unwrap();
        let one = PureState::basis(System::Qubits { n: 1 }, 1).unwrap();
        let t = zero.tensor(&one).unwrap();
        // qubit 0 in |0>, qubit 1 in |1> -> index 0b10
        assert_eq!(t.amplitudes()[2], c(1.0));
    }

    #[test]
    fn spin_dimension() {
        assert_eq!(System::Spin { twice_s: 3 }.dim(), 4);
        let s = PureState::basis(System::Spin { twice_s: 2 }, 1).unwrap();
        assert!(s.qubits().is_err());
        assert_eq!(s.twice_spin().unwrap(), 2);
    }
}

//! State families and random state samplers.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{GfdError, Result};
use crate::free_ops::apply_gaussian_unitary;
use crate::state::{PureState, System};

/// Largest qubit count for which dense states are built.
pub const DENSE_QUBIT_CAP: u32 = 24;
/// Largest 2s for spin states.
pub const SPIN_TWICE_CAP: u32 = 400;
/// Largest qubit count for Gaussian-unitary constructions.
pub const GAUSSIAN_QUBIT_CAP: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Product,
    Bell,
    Theta,
    Ghz,
    W,
    Extent,
    SpinBasis,
    SpinGhz,
    Magic,
    StabilizerCanonical,
    Haar,
    HaarEvenParity,
    GaussianRandom,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::Product,
        Family::Bell,
        Family::Theta,
        Family::Ghz,
        Family::W,
        Family::Extent,
        Family::SpinBasis,
        Family::SpinGhz,
        Family::Magic,
        Family::StabilizerCanonical,
        Family::Haar,
        Family::HaarEvenParity,
        Family::GaussianRandom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::Product => "product",
            Family::Bell => "bell",
            Family::Theta => "theta",
            Family::Ghz => "ghz",
            Family::W => "w",
            Family::Extent => "extent",
            Family::SpinBasis => "spin_basis",
            Family::SpinGhz => "spin_ghz",
            Family::Magic => "magic",
            Family::StabilizerCanonical => "stabilizer_canonical",
            Family::Haar => "haar",
            Family::HaarEvenParity => "haar_even_parity",
            Family::GaussianRandom => "gaussian_random",
        }
    }

    pub fn from_name(name: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| GfdError::Parameter(format!("unknown state family {name:?}")))
    }

    pub fn is_spin(&self) -> bool {
        matches!(self, Family::SpinBasis | Family::SpinGhz)
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Family::Haar | Family::HaarEvenParity | Family::GaussianRandom)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct StateParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Magnetic quantum number for `spin_basis`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Per-qubit Bloch angles `[polar, azimuth]` for `product`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bloch: Option<Vec<[f64; 2]>>,
    /// Basis index for `stabilizer_canonical`; `2^n` selects GHZ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: StateParams,
}

impl StateSpec {
    pub fn new(family: Family) -> Self {
        Self { family, n: None, s: None, seed: None, params: StateParams::default() }
    }

    pub fn qubits(family: Family, n: u32) -> Self {
        Self { n: Some(n), ..Self::new(family) }
    }

    pub fn spin(family: Family, s: f64) -> Self {
        Self { s: Some(s), ..Self::new(family) }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.params.theta = Some(theta);
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.params.gamma = Some(gamma);
        self
    }

    pub fn with_m(mut self, m: f64) -> Self {
        self.params.m = Some(m);
        self
    }

    pub fn with_bloch(mut self, bloch: Vec<[f64; 2]>) -> Self {
        self.params.bloch = Some(bloch);
        self
    }

    pub fn with_index(mut self, index: u64) -> Self {
        self.params.index = Some(index);
        self
    }

    /// Qubit count, defaulting to 2 for the two-qubit families.
    pub fn qubit_count(&self) -> Result<u32> {
        match (self.family, self.n) {
            (Family::Bell | Family::Theta, None) => Ok(2),
            (Family::Bell | Family::Theta, Some(2)) => Ok(2),
            (Family::Bell | Family::Theta, Some(n)) => {
                Err(GfdError::Parameter(format!("{} is a two-qubit family, got n={n}", self.family.name())))
            }
            (_, Some(n)) if n >= 1 => Ok(n),
            (f, _) => Err(GfdError::Parameter(format!("family {} needs a qubit count n >= 1", f.name()))),
        }
    }

    pub fn twice_s(&self) -> Result<u32> {
        let s = self
            .s
            .ok_or_else(|| GfdError::Parameter(format!("family {} needs a spin s", self.family.name())))?;
        twice_from_half_integer(s, "s").and_then(|t| {
            if t < 0 {
                Err(GfdError::Parameter(format!("spin s={s} must be non-negative")))
            } else {
                Ok(t as u32)
            }
        })
    }

    pub fn system(&self) -> Result<System> {
        if self.family.is_spin() || (self.family == Family::Haar && self.s.is_some() && self.n.is_none()) {
            Ok(System::Spin { twice_s: self.twice_s()? })
        } else {
            Ok(System::Qubits { n: self.qubit_count()? })
        }
    }
}

/// Converts a half-integer such as 1.5 into 3.
pub fn twice_from_half_integer(v: f64, what: &str) -> Result<i64> {
    let t = 2.0 * v;
    if !t.is_finite() || (t - t.round()).abs() > 1e-9 {
        return Err(GfdError::Parameter(format!("{what}={v} is not a multiple of 1/2")));
    }
    Ok(t.round() as i64)
}

/// Per-call generator; `stream` separates independent sample sequences.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn check_dense(n: u32) -> Result<()> {
    if n > DENSE_QUBIT_CAP {
        return Err(GfdError::capacity("dense state qubit count", DENSE_QUBIT_CAP as u64, n as u64));
    }
    Ok(())
}

fn single_qubit(theta: f64, phi: f64) -> [Complex64; 2] {
    [c((theta / 2.0).cos()), Complex64::from_polar((theta / 2.0).sin(), phi)]
}

fn product_of(factors: &[[Complex64; 2]]) -> Vec<Complex64> {
    let n = factors.len();
    (0..1usize << n)
        .map(|b| (0..n).map(|k| factors[k][(b >> k) & 1]).product())
        .collect()
}

fn ghz_amplitudes(n: u32) -> Vec<Complex64> {
    let d = 1usize << n;
    let mut amps = vec![c(0.0); d];
    amps[0] = c(FRAC_1_SQRT_2);
    amps[d - 1] = c(FRAC_1_SQRT_2);
    amps
}

pub fn make_state(spec: &StateSpec) -> Result<PureState> {
    let system = spec.system()?;
    if let System::Spin { twice_s } = system {
        if twice_s > SPIN_TWICE_CAP {
            return Err(GfdError::capacity("dense spin 2s", SPIN_TWICE_CAP as u64, twice_s as u64));
        }
    }
    match spec.family {
        Family::Product => {
            let n = spec.qubit_count()?;
            check_dense(n)?;
            let factors: Vec<[Complex64; 2]> = match (&spec.params.bloch, spec.seed) {
                (Some(angles), _) => {
                    if angles.len() != n as usize {
                        return Err(GfdError::Parameter(format!("{} Bloch pairs for {n} qubits", angles.len())));
                    }
                    angles.iter().map(|&[t, p]| single_qubit(t, p)).collect()
                }
                (None, Some(seed)) => {
                    let mut rng = seeded_rng(seed, 0);
                    (0..n)
                        .map(|_| {
                            let t = (1.0 - 2.0 * rng.random::<f64>()).acos();
                            let p = 2.0 * PI * rng.random::<f64>();
                            single_qubit(t, p)
                        })
                        .collect()
                }
                (None, None) => vec![[c(1.0), c(0.0)]; n as usize],
            };
            PureState::from_unnormalized(product_of(&factors), system)
        }
        Family::Bell => PureState::new(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)], system),
        Family::Theta => {
            let theta = spec
                .params
                .theta
                .ok_or_else(|| GfdError::Parameter("theta family needs params.theta".into()))?;
            if !(0.0..=FRAC_PI_2).contains(&theta) {
                return Err(GfdError::Parameter(format!("theta={theta} outside [0, pi/2]")));
            }
            let (a, b) = if theta == FRAC_PI_2 {
                (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
            } else {
                ((theta / 2.0).cos(), (theta / 2.0).sin())
            };
            PureState::from_unnormalized(vec![c(a), c(0.0), c(0.0), c(b)], system)
        }
        Family::Ghz => {
            let n = spec.qubit_count()?;
            check_dense(n)?;
            PureState::new(ghz_amplitudes(n), system)
        }
        Family::W => {
            let n = spec.qubit_count()?;
            check_dense(n)?;
            let mut amps = vec![c(0.0); 1usize << n];
            let w = 1.0 / (n as f64).sqrt();
            for k in 0..n {
                amps[1usize << k] = c(w);
            }
            PureState::from_unnormalized(amps, system)
        }
        Family::Extent => {
            let n = spec.qubit_count()?;
            if n % 4 != 0 {
                return Err(GfdError::Parameter(format!("extent family needs n divisible by 4, got {n}")));
            }
            check_dense(n)?;
            let gamma = spec
                .params
                .gamma
                .ok_or_else(|| GfdError::Parameter("extent family needs params.gamma".into()))?;
            if !(0.0..=PI).contains(&gamma) {
                return Err(GfdError::Parameter(format!("gamma={gamma} outside [0, pi]")));
            }
            let (a, b) = if gamma == PI {
                (FRAC_1_SQRT_2, FRAC_1_SQRT_2)
            } else {
                ((gamma / 4.0).cos(), (gamma / 4.0).sin())
            };
            let blocks = (n / 4) as usize;
            let amps = (0..1usize << n)
                .map(|idx| {
                    let mut v = c(1.0);
                    for blk in 0..blocks {
                        v *= match (idx >> (4 * blk)) & 0xF {
                            0 => a,
                            0xF => b,
                            _ => 0.0,
                        };
                    }
                    v
                })
                .collect();
            PureState::from_unnormalized(amps, system)
        }
        Family::SpinBasis => {
            let twice_s = spec.twice_s()?;
            let m = spec
                .params
                .m
                .ok_or_else(|| GfdError::Parameter("spin_basis family needs params.m".into()))?;
            let tm = twice_from_half_integer(m, "m")?;
            if tm.unsigned_abs() > twice_s as u64 || (twice_s as i64 - tm) % 2 != 0 {
                return Err(GfdError::Parameter(format!("m={m} is not in {{-s..s}} for s={}", spec.s.unwrap())));
            }
            PureState::basis(system, ((twice_s as i64 - tm) / 2) as usize)
        }
        Family::SpinGhz => {
            let twice_s = spec.twice_s()?;
            if twice_s == 0 {
                return Err(GfdError::Parameter("spin_ghz needs s > 0".into()));
            }
            let mut amps = vec![c(0.0); twice_s as usize + 1];
            amps[0] = c(FRAC_1_SQRT_2);
            amps[twice_s as usize] = c(FRAC_1_SQRT_2);
            PureState::new(amps, system)
        }
        Family::Magic => {
            let n = spec.qubit_count()?;
            check_dense(n)?;
            let m = [c(FRAC_1_SQRT_2), Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4)];
            PureState::from_unnormalized(product_of(&vec![m; n as usize]), system)
        }
        Family::StabilizerCanonical => {
            let n = spec.qubit_count()?;
            check_dense(n)?;
            let d = 1u64 << n;
            match spec.params.index.unwrap_or(0) {
                i if i < d => PureState::basis(system, i as usize),
                i if i == d => PureState::new(ghz_amplitudes(n), system),
                i => Err(GfdError::Parameter(format!("stabilizer index {i} > 2^n = {d}"))),
            }
        }
        Family::Haar => sample_haar(system, spec.seed.unwrap_or(0), None),
        Family::HaarEvenParity => sample_haar(system, spec.seed.unwrap_or(0), Some(Parity::Even)),
        Family::GaussianRandom => random_gaussian_state(spec.qubit_count()?, spec.seed.unwrap_or(0)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// Haar-random pure state from a normalized complex Gaussian vector.
pub fn sample_haar(system: System, seed: u64, parity: Option<Parity>) -> Result<PureState> {
    sample_haar_with(system, &mut seeded_rng(seed, 0), parity)
}

pub fn sample_haar_with<R: Rng + ?Sized>(system: System, rng: &mut R, parity: Option<Parity>) -> Result<PureState> {
    let d = system.dim();
    if d < 2 {
        return Err(GfdError::Parameter("Haar sampling needs dimension >= 2".into()));
    }
    if let System::Qubits { n } = system {
        check_dense(n)?;
    } else if parity.is_some() {
        return Err(GfdError::SystemType("parity filtering needs a qubit system".into()));
    }
    loop {
        let mut amps: Vec<Complex64> = (0..d)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Some(p) = parity {
            let keep = if p == Parity::Even { 0 } else { 1 };
            for (b, a) in amps.iter_mut().enumerate() {
                if b.count_ones() % 2 != keep {
                    *a = c(0.0);
                }
            }
        }
        // A null draw has probability zero; redraw from the same stream.
        if let Ok(state) = PureState::from_unnormalized(amps, system) {
            return Ok(state);
        }
    }
}

/// Random real antisymmetric couplings `h_ij` (i<j) over `2n` modes,
/// row-major over the upper triangle.
pub fn random_couplings<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Vec<f64> {
    let m = 2 * n as usize;
    (0..m * (m - 1) / 2).map(|_| rng.sample(StandardNormal)).collect()
}

/// `exp(Σ_{i<j} h_ij c_i c_j) |0...0>` with standard-normal `h`.
pub fn random_gaussian_state(n: u32, seed: u64) -> Result<PureState> {
    if n < 2 {
        return Err(GfdError::Parameter(format!("gaussian_random needs n >= 2, got {n}")));
    }
    if n > GAUSSIAN_QUBIT_CAP {
        return Err(GfdError::capacity("Gaussian unitary qubit count", GAUSSIAN_QUBIT_CAP as u64, n as u64));
    }
    let h = random_couplings(n, &mut seeded_rng(seed, 0));
    let vacuum = PureState::basis(System::Qubits { n }, 0)?;
    apply_gaussian_unitary(&vacuum, &h)
}

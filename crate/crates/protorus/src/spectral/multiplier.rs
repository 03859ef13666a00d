use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::clifford::{clifford_generators, clifford_vector};
use super::hermitian::HermitianMatrix;
use super::label::{trim_omega, Label, SolenoidLabel};
use crate::{Error, Result};

const BALL_CAP: usize = 2_000_000;

/// Rational lower bound of pi (the f64 value of pi, which is below pi).
pub fn pi_lo() -> BigRational {
    BigRational::new(BigInt::from(884279719003555i64), BigInt::from(1i64 << 48))
}

/// Rational upper bound of pi (one ulp above the f64 value).
pub fn pi_hi() -> BigRational {
    BigRational::new(BigInt::from(884279719003556i64), BigInt::from(1i64 << 48))
}

fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| {
        Error::InvalidParameter(format!("radius {x} is not a finite number"))
    })
}

/// Result of a ball-oracle query at some radius.
#[derive(Debug, Clone)]
pub enum Ball {
    /// complete: no label outside the list has spectrum meeting [-R, R]
    Certified(Vec<Label>),
    /// enumeration box only; no completeness claim
    SampledOnly { labels: Vec<Label>, box_note: String },
    /// the symbol is not proper; an explicit witness sequence accumulates
    /// near zero
    NotProper { witness: Vec<(Label, f64)> },
}

/// Translation-increment bound for a shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Increment {
    Exact(f64),
    BallSup { value: f64, radius: f64 },
}

impl Increment {
    pub fn value(&self) -> f64 {
        match self {
            Increment::Exact(v) => *v,
            Increment::BallSup { value, .. } => *value,
        }
    }
}

/// Construction specs for the built-in multiplier families.
#[derive(Debug, Clone)]
pub enum MultiplierSpec {
    /// Clifford symbol 2*pi*gamma(Lx) on Z^d; L must be invertible.
    Flat { l: Vec<Vec<f64>>, d: usize },
    /// Flat Clifford symbol on the limit labels Z[1/N]^2; not proper.
    FlatSolenoid { n: u64 },
    /// Scalar weighted Euclidean length sqrt(sum (w_i x_i)^2) on Z^m.
    LengthEuclid { weights: Vec<BigRational> },
    /// Scalar proper length |g| + h_N(g) on Z[1/N]^2.
    LengthSolenoid { n: u64 },
    /// The stage-n realization of the solenoid length on integer labels:
    /// l_n(x) = |x / N^(stage-1)| + h_N(x / N^(stage-1)) on Z^2.
    LengthSolenoidStage { n: u64, stage: usize },
    /// Scalar weight l(g) + lambda_beta on pairs (beta, g) with
    /// l(g) = w_slope * sum j*|g_j| and lambda_beta = lambda_slope * beta.
    WeightedOmega {
        w_slope: BigRational,
        lambda_slope: BigRational,
    },
    /// Scalar sqrt(4 pi^2 |x|^2 + j^2) on pairs (x in Z^d, j >= 1).
    StableCornerSquare { d: usize },
    /// Base symbol plus a bounded diagonal cosine perturbation.
    Perturbed {
        base: Box<MultiplierSpec>,
        amplitude: f64,
    },
}

#[derive(Debug, Clone)]
enum Kind {
    Flat {
        l: Vec<Vec<f64>>,
        l_exact: Vec<Vec<BigRational>>,
        d: usize,
        gammas: Vec<HermitianMatrix>,
        sigma_min: f64,
    },
    FlatSolenoid {
        n: u64,
        gammas: Vec<HermitianMatrix>,
    },
    LengthEuclid {
        weights: Vec<BigRational>,
        weights_f64: Vec<f64>,
    },
    LengthSolenoid {
        n: u64,
    },
    LengthSolenoidStage {
        n: u64,
        stage: usize,
    },
    WeightedOmega {
        w_slope: BigRational,
        lambda_slope: BigRational,
    },
    StableCornerSquare {
        d: usize,
    },
    Perturbed {
        base: Box<FourierMultiplier>,
        amplitude: f64,
    },
}

/// Diagonal Fourier-multiplier data: a label domain, a Hermitian fiber
/// symbol, a ball oracle, and an increment oracle.
#[derive(Debug, Clone)]
pub struct FourierMultiplier {
    kind: Kind,
    fiber_dim: usize,
    certified: bool,
}

/// Builds a multiplier from its spec, checking the family's constraints.
pub fn make_multiplier(spec: &MultiplierSpec) -> Result<FourierMultiplier> {
    match spec {
        MultiplierSpec::Flat { l, d } => {
            let d = *d;
            if l.len() != d || l.iter().any(|row| row.len() != d) {
                return Err(Error::DimensionMismatch("flat matrix must be d x d".into()));
            }
            let gammas = clifford_generators(d)?;
            // singular values of L via the Gram matrix
            let gram = HermitianMatrix::from_real_rows(
                &(0..d)
                    .map(|i| {
                        (0..d)
                            .map(|j| (0..d).map(|k| l[k][i] * l[k][j]).sum::<f64>())
                            .collect()
                    })
                    .collect::<Vec<_>>(),
            );
            let eigs = gram.eigenvalues(1e-14)?;
            let sigma_min = eigs.first().copied().unwrap_or(0.0).max(0.0).sqrt();
            let sigma_max = eigs.last().copied().unwrap_or(0.0).max(0.0).sqrt();
            if sigma_min <= 0.0 || sigma_max / sigma_min > 1e8 {
                return Err(Error::SingularL);
            }
            let l_exact: Vec<Vec<BigRational>> = l
                .iter()
                .map(|row| row.iter().map(|&x| rational_from_f64(x)).collect())
                .collect::<Result<_>>()?;
            let fiber_dim = gammas[0].dim();
            Ok(FourierMultiplier {
                kind: Kind::Flat {
                    l: l.clone(),
                    l_exact,
                    d,
                    gammas,
                    sigma_min,
                },
                fiber_dim,
                certified: true,
            })
        }
        MultiplierSpec::FlatSolenoid { n } => {
            if *n < 2 {
                return Err(Error::InvalidParameter("N must be >= 2".into()));
            }
            let gammas = clifford_generators(2)?;
            let fiber_dim = gammas[0].dim();
            Ok(FourierMultiplier {
                kind: Kind::FlatSolenoid { n: *n, gammas },
                fiber_dim,
                certified: true,
            })
        }
        MultiplierSpec::LengthEuclid { weights } => {
            if weights.is_empty() || weights.iter().any(|w| !w.is_positive()) {
                return Err(Error::NonProperWeights);
            }
            let weights_f64 = weights
                .iter()
                .map(|w| w.to_f64().unwrap_or(f64::NAN))
                .collect();
            Ok(FourierMultiplier {
                kind: Kind::LengthEuclid {
                    weights: weights.clone(),
                    weights_f64,
                },
                fiber_dim: 1,
                certified: true,
            })
        }
        MultiplierSpec::LengthSolenoid { n } => {
            if *n < 2 {
                return Err(Error::InvalidParameter("N must be >= 2".into()));
            }
            Ok(FourierMultiplier {
                kind: Kind::LengthSolenoid { n: *n },
                fiber_dim: 1,
                certified: true,
            })
        }
        MultiplierSpec::LengthSolenoidStage { n, stage } => {
            if *n < 2 {
                return Err(Error::InvalidParameter("N must be >= 2".into()));
            }
            if *stage == 0 {
                return Err(Error::InvalidParameter("stages are 1-based".into()));
            }
            Ok(FourierMultiplier {
                kind: Kind::LengthSolenoidStage { n: *n, stage: *stage },
                fiber_dim: 1,
                certified: true,
            })
        }
        MultiplierSpec::WeightedOmega { w_slope, lambda_slope } => {
            if !w_slope.is_positive() || !lambda_slope.is_positive() {
                return Err(Error::NonProperWeights);
            }
            Ok(FourierMultiplier {
                kind: Kind::WeightedOmega {
                    w_slope: w_slope.clone(),
                    lambda_slope: lambda_slope.clone(),
                },
                fiber_dim: 1,
                certified: true,
            })
        }
        MultiplierSpec::StableCornerSquare { d } => {
            if *d == 0 || *d > 6 {
                return Err(Error::InvalidParameter("flat dimension must be 1..=6".into()));
            }
            Ok(FourierMultiplier {
                kind: Kind::StableCornerSquare { d: *d },
                fiber_dim: 1,
                certified: true,
            })
        }
        MultiplierSpec::Perturbed { base, amplitude } => {
            if !amplitude.is_finite() {
                return Err(Error::InvalidParameter("perturbation amplitude must be finite".into()));
            }
            let base = make_multiplier(base)?;
            let fiber_dim = base.fiber_dim;
            Ok(FourierMultiplier {
                kind: Kind::Perturbed {
                    base: Box::new(base),
                    amplitude: *amplitude,
                },
                fiber_dim,
                certified: true,
            })
        }
    }
}

/// Deterministic bounded diagonal perturbation value for a label.
fn perturbation_value(label: &Label, amplitude: f64) -> f64 {
    let (a, _, coords) = label.sort_key();
    let mut h = a as i64 as f64;
    for (i, c) in coords.iter().enumerate() {
        h += (*c as f64) * (1.3 + 0.7 * i as f64);
    }
    amplitude * h.cos()
}

impl FourierMultiplier {
    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Downgrades the ball oracle to sampled-only; operations demanding
    /// certification refuse the result rather than silently trusting it.
    pub fn declare_sampled_only(mut self) -> Self {
        self.certified = false;
        self
    }

    pub fn domain_name(&self) -> &'static str {
        match &self.kind {
            Kind::Flat { .. } | Kind::LengthEuclid { .. } | Kind::LengthSolenoidStage { .. } => {
                "lattice"
            }
            Kind::FlatSolenoid { .. } | Kind::LengthSolenoid { .. } => "solenoid",
            Kind::WeightedOmega { .. } => "omega",
            Kind::StableCornerSquare { .. } => "square",
            Kind::Perturbed { base, .. } => base.domain_name(),
        }
    }

    /// The Hermitian fiber symbol at a label.
    pub fn symbol(&self, label: &Label) -> Result<HermitianMatrix> {
        match (&self.kind, label) {
            (Kind::Flat { l, d, gammas, .. }, Label::Lattice(x)) => {
                if x.len() != *d {
                    return Err(Error::DimensionMismatch("label length".into()));
                }
                let lx: Vec<f64> = (0..*d)
                    .map(|i| (0..*d).map(|j| l[i][j] * x[j] as f64).sum())
                    .collect();
                Ok(clifford_vector(gammas, &lx).scale_real(2.0 * std::f64::consts::PI))
            }
            (Kind::FlatSolenoid { n, gammas }, Label::Solenoid(g)) => {
                let v = g.components_f64(*n);
                Ok(clifford_vector(gammas, &v).scale_real(2.0 * std::f64::consts::PI))
            }
            (Kind::LengthEuclid { weights_f64, .. }, Label::Lattice(x)) => {
                if x.len() != weights_f64.len() {
                    return Err(Error::DimensionMismatch("label length".into()));
                }
                let v = x
                    .iter()
                    .zip(weights_f64)
                    .map(|(c, w)| (w * *c as f64).powi(2))
                    .sum::<f64>()
                    .sqrt();
                Ok(HermitianMatrix::diagonal(&[v]))
            }
            (Kind::LengthSolenoid { n }, Label::Solenoid(g)) => {
                Ok(HermitianMatrix::diagonal(&[g.length(*n)]))
            }
            (Kind::LengthSolenoidStage { n, stage }, Label::Lattice(x)) => {
                if x.len() != 2 {
                    return Err(Error::DimensionMismatch("label length".into()));
                }
                let g = SolenoidLabel::new([x[0], x[1]], *stage as u32 - 1, *n);
                Ok(HermitianMatrix::diagonal(&[g.length(*n)]))
            }
            (Kind::WeightedOmega { w_slope, lambda_slope }, Label::Omega { beta, coords }) => {
                let w = w_slope.to_f64().unwrap();
                let lam = lambda_slope.to_f64().unwrap();
                let ell: f64 = coords
                    .iter()
                    .enumerate()
                    .map(|(i, c)| w * (i + 1) as f64 * c.unsigned_abs() as f64)
                    .sum();
                Ok(HermitianMatrix::diagonal(&[ell + lam * *beta as f64]))
            }
            (Kind::StableCornerSquare { d }, Label::Square { x, j }) => {
                if x.len() != *d {
                    return Err(Error::DimensionMismatch("label length".into()));
                }
                let n2: f64 = x.iter().map(|c| (*c as f64).powi(2)).sum();
                let pi = std::f64::consts::PI;
                Ok(HermitianMatrix::diagonal(&[
                    (4.0 * pi * pi * n2 + (*j as f64).powi(2)).sqrt(),
                ]))
            }
            (Kind::Perturbed { base, amplitude }, _) => {
                let b = base.symbol(label)?;
                let g = HermitianMatrix::identity(b.dim())
                    .scale_real(perturbation_value(label, *amplitude));
                Ok(b.add(&g))
            }
            _ => Err(Error::DimensionMismatch(format!(
                "label does not belong to the {} domain",
                self.domain_name()
            ))),
        }
    }

    /// Ball-oracle query: all labels whose spectrum can meet [-R, R].
    pub fn ball(&self, radius: f64) -> Result<Ball> {
        let r = rational_from_f64(radius)?;
        if r.is_negative() {
            return Ok(Ball::Certified(vec![]));
        }
        let ball = self.ball_exact(&r)?;
        if self.certified {
            Ok(ball)
        } else {
            match ball {
                Ball::Certified(labels) => Ok(Ball::SampledOnly {
                    labels,
                    box_note: "oracle declared sampled-only".into(),
                }),
                other => Ok(other),
            }
        }
    }

    fn ball_exact(&self, r: &BigRational) -> Result<Ball> {
        let r2 = r * r;
        match &self.kind {
            Kind::Flat { l_exact, d, sigma_min, .. } => {
                // box bound from |Lx| >= sigma_min |x|, with a safety margin
                // for the numerically computed sigma_min
                let sigma_safe = sigma_min * (1.0 - 1e-9);
                let r_f = r.to_f64().unwrap_or(0.0);
                let bound = (r_f / (2.0 * std::f64::consts::PI * sigma_safe)).ceil() as i64 + 1;
                let four_pi_lo_sq = BigRational::from_integer(4.into()) * pi_lo() * pi_lo();
                let mut labels = Vec::new();
                let mut x = vec![-bound; *d];
                loop {
                    // exact test: 4 pi^2 |Lx|^2 <= R^2, pi from below
                    let mut q = BigRational::zero();
                    for row in l_exact {
                        let mut acc = BigRational::zero();
                        for (j, coef) in row.iter().enumerate() {
                            acc += coef * BigRational::from_integer(BigInt::from(x[j]));
                        }
                        q += &acc * &acc;
                    }
                    if &four_pi_lo_sq * &q <= r2 {
                        labels.push(Label::Lattice(x.clone()));
                        if labels.len() > BALL_CAP {
                            return Err(Error::InvalidParameter("ball too large".into()));
                        }
                    }
                    if !increment_box(&mut x, bound) {
                        break;
                    }
                }
                labels.sort_by_key(|l| l.sort_key());
                Ok(Ball::Certified(labels))
            }
            Kind::FlatSolenoid { n, .. } => {
                let witness = (1..=12u32)
                    .map(|k| {
                        let g = SolenoidLabel::new([1, 0], k, *n);
                        let eig = 2.0 * std::f64::consts::PI * g.norm_f64(*n);
                        (Label::Solenoid(g), eig)
                    })
                    .collect();
                Ok(Ball::NotProper { witness })
            }
            Kind::LengthEuclid { weights, .. } => {
                let mut labels = Vec::new();
                let d = weights.len();
                let bounds: Vec<i64> = weights
                    .iter()
                    .map(|w| (r / w).to_f64().unwrap_or(0.0).floor() as i64 + 1)
                    .collect();
                let mut x = vec![0i64; d];
                for i in 0..d {
                    x[i] = -bounds[i];
                }
                loop {
                    let mut q = BigRational::zero();
                    for (j, w) in weights.iter().enumerate() {
                        let t = w * BigRational::from_integer(BigInt::from(x[j]));
                        q += &t * &t;
                    }
                    if q <= r2 {
                        labels.push(Label::Lattice(x.clone()));
                        if labels.len() > BALL_CAP {
                            return Err(Error::InvalidParameter("ball too large".into()));
                        }
                    }
                    if !increment_box_asym(&mut x, &bounds) {
                        break;
                    }
                }
                labels.sort_by_key(|l| l.sort_key());
                Ok(Ball::Certified(labels))
            }
            Kind::LengthSolenoid { n } => {
                let mut labels = Vec::new();
                let depth_cap = r.to_f64().unwrap_or(0.0).floor().max(0.0) as u32;
                for h in 0..=depth_cap {
                    // |g| <= R - h with g = a / N^h: |a|^2 <= ((R-h) N^h)^2
                    let budget = r - BigRational::from_integer(BigInt::from(h));
                    if budget.is_negative() {
                        continue;
                    }
                    let scale = BigRational::from_integer(BigInt::from(*n).pow(h));
                    let lim = &budget * &scale;
                    let lim2 = &lim * &lim;
                    let bound = lim.to_f64().unwrap_or(0.0).floor() as i64 + 1;
                    for a1 in -bound..=bound {
                        for a2 in -bound..=bound {
                            let g = SolenoidLabel::new([a1, a2], h, *n);
                            if g.depth != h {
                                continue; // not minimal at this depth
                            }
                            let q = BigRational::from_integer(
                                BigInt::from(a1) * BigInt::from(a1)
                                    + BigInt::from(a2) * BigInt::from(a2),
                            );
                            if q <= lim2 {
                                labels.push(Label::Solenoid(g));
                                if labels.len() > BALL_CAP {
                                    return Err(Error::InvalidParameter("ball too large".into()));
                                }
                            }
                        }
                    }
                }
                labels.sort_by_key(|l| l.sort_key());
                Ok(Ball::Certified(labels))
            }
            Kind::LengthSolenoidStage { n, stage } => {
                // l_n(x) <= R needs |x| <= R * N^(stage-1); membership is the
                // exact test |x|^2 <= ((R - h) * N^(stage-1))^2 with h the
                // denominator depth of x / N^(stage-1)
                let depth = *stage as u32 - 1;
                let scale = BigRational::from_integer(BigInt::from(*n).pow(depth));
                let lim = r * &scale;
                let bound = lim.to_f64().unwrap_or(0.0).floor() as i64 + 1;
                let mut labels = Vec::new();
                for x1 in -bound..=bound {
                    for x2 in -bound..=bound {
                        let g = SolenoidLabel::new([x1, x2], depth, *n);
                        let budget = r - BigRational::from_integer(BigInt::from(g.depth));
                        if budget.is_negative() {
                            continue;
                        }
                        let lim_g = &budget * &scale;
                        let q = BigRational::from_integer(
                            BigInt::from(x1) * BigInt::from(x1)
                                + BigInt::from(x2) * BigInt::from(x2),
                        );
                        if q <= &lim_g * &lim_g {
                            labels.push(Label::Lattice(vec![x1, x2]));
                            if labels.len() > BALL_CAP {
                                return Err(Error::InvalidParameter("ball too large".into()));
                            }
                        }
                    }
                }
                labels.sort_by_key(|l| l.sort_key());
                Ok(Ball::Certified(labels))
            }
            Kind::WeightedOmega { w_slope, lambda_slope } => {
                let mut labels = Vec::new();
                let mut beta = 1u32;
                loop {
                    let lam = lambda_slope * BigRational::from_integer(BigInt::from(beta));
                    if &lam > r {
                        break;
                    }
                    let budget = r - &lam;
                    // enumerate finitely supported g with w * sum j*|g_j| <= budget
                    let max_j = (&budget / w_slope).to_f64().unwrap_or(0.0).floor() as usize;
                    let mut coords = vec![0i64; max_j];
                    enumerate_omega(
                        &mut coords,
                        0,
                        &budget,
                        w_slope,
                        &mut |c: &[i64]| {
                            labels.push(Label::Omega {
                                beta,
                                coords: trim_omega(c.to_vec()),
                            });
                        },
                    );
                    if labels.len() > BALL_CAP {
                        return Err(Error::InvalidParameter("ball too large".into()));
                    }
                    beta += 1;
                }
                labels.sort_by_key(|l| l.sort_key());
                labels.dedup();
                Ok(Ball::Certified(labels))
            }
            Kind::StableCornerSquare { d } => {
                let mut labels = Vec::new();
                let four_pi_lo_sq = BigRational::from_integer(4.into()) * pi_lo() * pi_lo();
                let mut j = 1u32;
                loop {
                    let j2 = BigRational::from_integer(BigInt::from(j) * BigInt::from(j));
                    if j2 > r2 {
                        break;
                    }
                    let slack = &r2 - &j2;
                    let bound = (slack.to_f64().unwrap_or(0.0)
                        / (4.0 * std::f64::consts::PI * std::f64::consts::PI))
                        .sqrt()
                        .ceil() as i64
                        + 1;
                    let mut x = vec![-bound; *d];
                    loop {
                        let q = BigRational::from_integer(
                            x.iter()
                                .map(|c| BigInt::from(*c) * BigInt::from(*c))
                                .sum::<BigInt>(),
                        );
                        if &four_pi_lo_sq * &q <= slack {
                            labels.push(Label::Square { x: x.clone(), j });
                            if labels.len() > BALL_CAP {
                                return Err(Error::InvalidParameter("ball too large".into()));
                            }
                        }
                        if !increment_box(&mut x, bound) {
                            break;
                        }
                    }
                    j += 1;
                }
                labels.sort_by_key(|l| l.sort_key());
                Ok(Ball::Certified(labels))
            }
            Kind::Perturbed { base, amplitude } => {
                // enlarge the base radius by the sup norm of the perturbation
                let enlarged = r + rational_from_f64(amplitude.abs())?;
                base.ball_exact(&enlarged)
            }
        }
    }

    /// Translation-increment bound sup_x |F(x+a) - F(x)| for a shift.
    pub fn increment(&self, shift: &Label) -> Result<Increment> {
        match (&self.kind, shift) {
            (Kind::Flat { l, d, .. }, Label::Lattice(a)) => {
                if a.len() != *d {
                    return Err(Error::DimensionMismatch("shift length".into()));
                }
                let la: f64 = (0..*d)
                    .map(|i| {
                        (0..*d)
                            .map(|j| l[i][j] * a[j] as f64)
                            .sum::<f64>()
                            .powi(2)
                    })
                    .sum::<f64>()
                    .sqrt();
                Ok(Increment::Exact(2.0 * std::f64::consts::PI * la))
            }
            (Kind::FlatSolenoid { n, .. }, Label::Solenoid(a)) => Ok(Increment::Exact(
                2.0 * std::f64::consts::PI * a.norm_f64(*n),
            )),
            (Kind::LengthEuclid { weights_f64, .. }, Label::Lattice(a)) => {
                let v = a
                    .iter()
                    .zip(weights_f64)
                    .map(|(c, w)| (w * *c as f64).powi(2))
                    .sum::<f64>()
                    .sqrt();
                Ok(Increment::Exact(v))
            }
            (Kind::LengthSolenoid { n }, Label::Solenoid(a)) => {
                // |l(g+a) - l(g)| <= |a| + h_N(a)
                Ok(Increment::Exact(a.norm_f64(*n) + a.depth as f64))
            }
            (Kind::LengthSolenoidStage { n, stage }, Label::Lattice(a)) => {
                if a.len() != 2 {
                    return Err(Error::DimensionMismatch("shift length".into()));
                }
                let g = SolenoidLabel::new([a[0], a[1]], *stage as u32 - 1, *n);
                Ok(Increment::Exact(g.norm_f64(*n) + g.depth as f64))
            }
            (Kind::WeightedOmega { w_slope, .. }, Label::Omega { coords, .. }) => {
                let w = w_slope.to_f64().unwrap();
                let ell: f64 = coords
                    .iter()
                    .enumerate()
                    .map(|(i, c)| w * (i + 1) as f64 * c.unsigned_abs() as f64)
                    .sum();
                Ok(Increment::Exact(ell))
            }
            (Kind::StableCornerSquare { .. }, Label::Square { x, .. }) => {
                let n: f64 = x.iter().map(|c| (*c as f64).powi(2)).sum::<f64>().sqrt();
                Ok(Increment::Exact(2.0 * std::f64::consts::PI * n))
            }
            (Kind::Perturbed { base, amplitude }, _) => {
                let b = base.increment(shift)?;
                Ok(Increment::Exact(b.value() + 2.0 * amplitude.abs()))
            }
            _ => Err(Error::DimensionMismatch(format!(
                "shift does not belong to the {} domain",
                self.domain_name()
            ))),
        }
    }

    /// Adds a shift to a label within this multiplier's domain.
    pub fn label_add(&self, x: &Label, a: &Label) -> Result<Label> {
        match (&self.kind, x, a) {
            (
                Kind::Flat { .. } | Kind::LengthEuclid { .. } | Kind::LengthSolenoidStage { .. },
                Label::Lattice(x),
                Label::Lattice(a),
            ) => {
                if x.len() != a.len() {
                    return Err(Error::DimensionMismatch("shift length".into()));
                }
                Ok(Label::Lattice(
                    x.iter().zip(a).map(|(p, q)| p + q).collect(),
                ))
            }
            (
                Kind::FlatSolenoid { n, .. } | Kind::LengthSolenoid { n },
                Label::Solenoid(x),
                Label::Solenoid(a),
            ) => Ok(Label::Solenoid(x.add(a, *n))),
            (
                Kind::WeightedOmega { .. },
                Label::Omega { beta, coords },
                Label::Omega { coords: shift, .. },
            ) => {
                let len = coords.len().max(shift.len());
                let mut out = vec![0i64; len];
                for (i, c) in coords.iter().enumerate() {
                    out[i] += c;
                }
                for (i, c) in shift.iter().enumerate() {
                    out[i] += c;
                }
                Ok(Label::Omega {
                    beta: *beta,
                    coords: trim_omega(out),
                })
            }
            (Kind::StableCornerSquare { .. }, Label::Square { x, j }, Label::Lattice(a)) => {
                if x.len() != a.len() {
                    return Err(Error::DimensionMismatch("shift length".into()));
                }
                Ok(Label::Square {
                    x: x.iter().zip(a).map(|(p, q)| p + q).collect(),
                    j: *j,
                })
            }
            (Kind::Perturbed { base, .. }, _, _) => base.label_add(x, a),
            _ => Err(Error::DimensionMismatch("shift/label domain mismatch".into())),
        }
    }
}

/// Advances x through the box [-bound, bound]^d, returning false at the end.
fn increment_box(x: &mut [i64], bound: i64) -> bool {
    for c in x.iter_mut() {
        if *c < bound {
            *c += 1;
            return true;
        }
        *c = -bound;
    }
    false
}

fn increment_box_asym(x: &mut [i64], bounds: &[i64]) -> bool {
    for (c, &b) in x.iter_mut().zip(bounds) {
        if *c < b {
            *c += 1;
            return true;
        }
        *c = -b;
    }
    false
}

/// Recursively enumerates coords with w * sum (j+1)*|c_j| <= budget.
fn enumerate_omega(
    coords: &mut Vec<i64>,
    idx: usize,
    budget: &BigRational,
    w_slope: &BigRational,
    visit: &mut impl FnMut(&[i64]),
) {
    if idx == coords.len() {
        visit(coords);
        return;
    }
    let weight = w_slope * BigRational::from_integer(BigInt::from(idx as i64 + 1));
    let max_abs = (budget / &weight).to_f64().unwrap_or(0.0).floor() as i64;
    for v in -max_abs..=max_abs {
        let cost = &weight * BigRational::from_integer(BigInt::from(v.abs()));
        if &cost > budget {
            continue;
        }
        coords[idx] = v;
        let rest = budget - &cost;
        enumerate_omega(coords, idx + 1, &rest, w_slope, visit);
        coords[idx] = 0;
    }
}

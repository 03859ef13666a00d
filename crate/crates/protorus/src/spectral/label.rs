use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

/// A point of Z[1/N]^2 stored as num / N^depth with minimal depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SolenoidLabel {
    pub num: [i64; 2],
    pub depth: u32,
}

impl SolenoidLabel {
    /// Normalizes to minimal depth: strips common factors of N.
    pub fn new(num: [i64; 2], depth: u32, n: u64) -> SolenoidLabel {
        let n = n as i64;
        let mut num = num;
        let mut depth = depth;
        while depth > 0 && num[0] % n == 0 && num[1] % n == 0 {
            num[0] /= n;
            num[1] /= n;
            depth -= 1;
        }
        SolenoidLabel { num, depth }
    }

    pub fn zero() -> SolenoidLabel {
        SolenoidLabel { num: [0, 0], depth: 0 }
    }

    /// The denominator depth h_N: minimal k with N^k * g integral.
    pub fn depth_value(&self) -> u32 {
        self.depth
    }

    pub fn add(&self, other: &SolenoidLabel, n: u64) -> SolenoidLabel {
        let d = self.depth.max(other.depth);
        let scale_a = (n as i64).pow(d - self.depth);
        let scale_b = (n as i64).pow(d - other.depth);
        SolenoidLabel::new(
            [
                self.num[0] * scale_a + other.num[0] * scale_b,
                self.num[1] * scale_a + other.num[1] * scale_b,
            ],
            d,
            n,
        )
    }

    pub fn neg(&self) -> SolenoidLabel {
        SolenoidLabel {
            num: [-self.num[0], -self.num[1]],
            depth: self.depth,
        }
    }

    /// Euclidean norm squared as an exact rational.
    pub fn norm_sqr(&self, n: u64) -> BigRational {
        let a = BigInt::from(self.num[0]);
        let b = BigInt::from(self.num[1]);
        let den = BigInt::from(n).pow(2 * self.depth);
        BigRational::new(&a * &a + &b * &b, den)
    }

    pub fn norm_f64(&self, n: u64) -> f64 {
        let scale = (n as f64).powi(self.depth as i32);
        ((self.num[0] as f64).hypot(self.num[1] as f64)) / scale
    }

    /// The proper length |g| + h_N(g).
    pub fn length(&self, n: u64) -> f64 {
        self.norm_f64(n) + self.depth as f64
    }

    pub fn components_f64(&self, n: u64) -> [f64; 2] {
        let scale = (n as f64).powi(self.depth as i32);
        [self.num[0] as f64 / scale, self.num[1] as f64 / scale]
    }
}

/// Finitely supported integer sequence, trailing zeros trimmed.
pub type OmegaVec = Vec<i64>;

pub fn trim_omega(mut v: OmegaVec) -> OmegaVec {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// A Fourier label of one of the supported domains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    /// point of Z^m
    Lattice(Vec<i64>),
    /// point of Z[1/N]^2
    Solenoid(SolenoidLabel),
    /// right matrix index (1-based) plus a finitely supported lattice point
    Omega { beta: u32, coords: OmegaVec },
    /// flat lattice point plus a number-operator index (1-based)
    Square { x: Vec<i64>, j: u32 },
}

impl Label {
    pub fn lattice(v: &[i64]) -> Label {
        Label::Lattice(v.to_vec())
    }

    /// Canonical enumeration key: depth/degree data first, then coordinates.
    pub fn sort_key(&self) -> (u32, u32, Vec<i64>) {
        match self {
            Label::Lattice(v) => (0, 0, v.clone()),
            Label::Solenoid(s) => (s.depth, 0, s.num.to_vec()),
            Label::Omega { beta, coords } => (*beta, 0, coords.clone()),
            Label::Square { x, j } => (*j, 0, x.clone()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Lattice(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Label::Solenoid(s) => {
                write!(f, "({}:{},{})", s.depth, s.num[0], s.num[1])
            }
            Label::Omega { beta, coords } => {
                write!(f, "(beta={beta};")?;
                for (i, c) in coords.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Label::Square { x, j } => {
                write!(f, "(j={j};")?;
                for (i, c) in x.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

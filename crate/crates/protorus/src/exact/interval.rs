use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Closed rational interval [lo, hi].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Interval {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(v: BigRational) -> Interval {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let candidates = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &BigRational) -> Interval {
        if c.is_negative() {
            Interval::new(&self.hi * c, &self.lo * c)
        } else {
            Interval::new(&self.lo * c, &self.hi * c)
        }
    }

    /// Integer power; even powers of zero-straddling intervals floor at 0.
    pub fn pow(&self, e: u32) -> Interval {
        match e {
            0 => Interval::point(BigRational::from_integer(1.into())),
            1 => self.clone(),
            _ => {
                let lo_p = pow_rat(&self.lo, e);
                let hi_p = pow_rat(&self.hi, e);
                if e % 2 == 1 {
                    Interval::new(lo_p, hi_p)
                } else if self.contains_zero() {
                    Interval::new(BigRational::zero(), lo_p.max(hi_p))
                } else {
                    Interval::new(lo_p.clone().min(hi_p.clone()), lo_p.max(hi_p))
                }
            }
        }
    }

    /// Reciprocal; requires the interval to exclude zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::new(
            BigRational::from_integer(1.into()) / &self.hi,
            BigRational::from_integer(1.into()) / &self.lo,
        ))
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

fn pow_rat(r: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::from_integer(1.into());
    for _ in 0..e {
        acc *= r;
    }
    acc
}

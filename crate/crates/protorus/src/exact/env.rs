use num_rational::BigRational;
use num_traits::Signed;

use crate::{Error, Result};

/// Default refinement budget for sign certification; anchors halve each step.
pub const DEFAULT_MAX_REFINEMENTS: usize = 64;

/// Rational midpoint/radius enclosure for one generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Anchor {
    pub midpoint: BigRational,
    pub radius: BigRational,
}

impl Anchor {
    pub fn new(midpoint: BigRational, radius: BigRational) -> Result<Anchor> {
        if !radius.is_positive() {
            return Err(Error::InvalidParameter("anchor radius must be > 0".into()));
        }
        Ok(Anchor { midpoint, radius })
    }

    fn halved(&self) -> Anchor {
        Anchor {
            midpoint: self.midpoint.clone(),
            radius: &self.radius / BigRational::from_integer(2.into()),
        }
    }
}

/// Ordered list of formal generators with optional numeric anchors.
///
/// The independence assertion records the user's declaration that {1} together
/// with the monomials appearing in loaded skew forms are rationally
/// independent; nothing here verifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorEnv {
    names: Vec<String>,
    anchors: Vec<Option<Anchor>>,
    independence_assertion: bool,
}

impl Default for GeneratorEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl GeneratorEnv {
    pub fn new() -> GeneratorEnv {
        GeneratorEnv {
            names: Vec::new(),
            anchors: Vec::new(),
            independence_assertion: true,
        }
    }

    /// Declares an anchored generator, returning its index.
    pub fn declare(
        &mut self,
        name: &str,
        midpoint: BigRational,
        radius: BigRational,
    ) -> Result<usize> {
        self.check_fresh(name)?;
        self.names.push(name.to_string());
        self.anchors.push(Some(Anchor::new(midpoint, radius)?));
        Ok(self.names.len() - 1)
    }

    /// Declares a generator with no numeric anchor.
    pub fn declare_formal(&mut self, name: &str) -> Result<usize> {
        self.check_fresh(name)?;
        self.names.push(name.to_string());
        self.anchors.push(None);
        Ok(self.names.len() - 1)
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if self.names.iter().any(|n| n == name) {
            return Err(Error::InvalidParameter(format!(
                "generator `{name}` already declared"
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn anchor(&self, idx: usize) -> Result<&Anchor> {
        self.anchors
            .get(idx)
            .and_then(|a| a.as_ref())
            .ok_or_else(|| Error::MissingAnchor(self.names.get(idx).cloned().unwrap_or_default()))
    }

    pub fn set_independence_assertion(&mut self, asserted: bool) {
        self.independence_assertion = asserted;
    }

    pub fn independence_asserted(&self) -> bool {
        self.independence_assertion
    }

    /// New environment with every anchor radius halved.
    pub fn refined(&self) -> GeneratorEnv {
        GeneratorEnv {
            names: self.names.clone(),
            anchors: self
                .anchors
                .iter()
                .map(|a| a.as_ref().map(Anchor::halved))
                .collect(),
            independence_assertion: self.independence_assertion,
        }
    }
}

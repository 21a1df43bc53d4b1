use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmap::{Domain, PiecewiseMap};
use crate::rational::Rational;
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub map: PiecewiseMap,
}

/// An asserted fact with a note on where it comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub value: bool,
    pub note: String,
}

/// Facts about the group that cannot be derived from finitely many
/// generators. Every consumer records which fields it relied on.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Metadata {
    /// The slope group is generated by these primes.
    pub slope_primes: Vec<u64>,
    /// Alternative description of the slope group by arbitrary generators.
    #[serde(serialize_with = "crate::rational::ser::many")]
    pub slope_generators: Vec<Rational>,
    pub coherent: Option<Assertion>,
    pub breakpoints: Option<String>,
    /// Some element of the abstract group acts with infinitely many
    /// components of support in a coherent action.
    pub infinite_support: Option<String>,
    pub notes: Vec<String>,
}

impl Metadata {
    pub fn is_empty(&self) -> bool {
        *self == Metadata::default()
    }

    pub fn declares_slope_group(&self) -> bool {
        !self.slope_primes.is_empty() || !self.slope_generators.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub domain: Domain,
    generators: Vec<Generator>,
    pub metadata: Metadata,
}

impl GroupSpec {
    pub fn new(name: impl Into<String>, domain: Domain, generators: Vec<Generator>) -> Result<Self> {
        let mut seen = HashSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::DuplicateGenerator(g.name.clone()));
            }
            if g.map.domain() != &domain {
                return Err(Error::DomainMismatch(
                    domain.to_string(),
                    g.map.domain().to_string(),
                ));
            }
        }
        Ok(GroupSpec {
            name: name.into(),
            domain,
            generators,
            metadata: Metadata::default(),
        })
    }

    pub fn with_metadata(mut self, metadata: Metadata) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&PiecewiseMap> {
        self.index_of(name).map(|i| &self.generators[i].map)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn identity(&self) -> PiecewiseMap {
        PiecewiseMap::identity(self.domain.clone())
    }

    /// Element of a word, letters applied left to right.
    pub fn evaluate(&self, word: &Word) -> Result<PiecewiseMap> {
        let mut acc = self.identity();
        for l in word.letters() {
            let g = self
                .generator(&l.name)
                .ok_or_else(|| Error::UnknownGenerator(l.name.clone()))?;
            acc = acc.compose(&g.pow(l.exp))?;
        }
        Ok(acc)
    }
}

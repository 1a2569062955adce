//! Module descriptions: spans of generators, or nilpotent filtration layers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_element, Context, Element};
use crate::odd::is_prime;

/// One layer `Σ^m R_m` of the nilpotent filtration, `R_m` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub m: u32,
    pub generators: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Span { generators: Vec<Element> },
    Filtration { layers: Vec<Layer> },
}

/// An unstable module embedded in `H*(BV_d)^{⊕α}`, up to an iterated
/// suspension. `degree_bound` refers to unsuspended degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDescription {
    pub prime: u32,
    pub d: usize,
    pub alpha: u32,
    pub suspension: i64,
    pub kind: ModuleKind,
    pub degree_bound: u32,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDescription {
    #[serde(default = "default_prime")]
    prime: u32,
    d: usize,
    #[serde(default = "default_alpha")]
    alpha: u32,
    #[serde(default)]
    suspension: i64,
    degree_bound: u32,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layers: Option<Vec<RawLayer>>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawLayer {
    m: u32,
    generators: Vec<String>,
}

fn default_prime() -> u32 {
    2
}

fn default_alpha() -> u32 {
    1
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidDescription(msg.into()))
}

impl ModuleDescription {
    pub fn span(prime: u32, d: usize, generators: Vec<Element>, degree_bound: u32) -> Result<Self> {
        let m = ModuleDescription {
            prime,
            d,
            alpha: 1,
            suspension: 0,
            kind: ModuleKind::Span { generators },
            degree_bound,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn filtration(prime: u32, d: usize, layers: Vec<Layer>, degree_bound: u32) -> Result<Self> {
        let m = ModuleDescription {
            prime,
            d,
            alpha: 1,
            suspension: 0,
            kind: ModuleKind::Filtration { layers },
            degree_bound,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn with_suspension(mut self, suspension: i64) -> Self {
        self.suspension = suspension;
        self
    }

    pub fn with_bound(mut self, degree_bound: u32) -> Result<Self> {
        self.degree_bound = degree_bound;
        self.validate()?;
        Ok(self)
    }

    pub fn with_alpha(mut self, alpha: u32) -> Result<Self> {
        self.alpha = alpha;
        self.validate()?;
        Ok(self)
    }

    pub fn context(&self) -> Result<Context> {
        Context::new(self.prime, self.d, self.alpha).map_err(|e| Error::InvalidDescription(e.to_string()))
    }

    /// The layers `(m_i, generators)`; a span is the single layer `m = 0`.
    pub fn layers(&self) -> Vec<(u32, &[Element])> {
        match &self.kind {
            ModuleKind::Span { generators } => vec![(0, generators.as_slice())],
            ModuleKind::Filtration { layers } => layers.iter().map(|l| (l.m, l.generators.as_slice())).collect(),
        }
    }

    pub fn is_filtration(&self) -> bool {
        matches!(self.kind, ModuleKind::Filtration { .. })
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.prime) {
            return invalid(format!("prime {} is not a prime", self.prime));
        }
        if self.d == 0 {
            return invalid("d must be at least 1");
        }
        if self.alpha == 0 {
            return invalid("alpha must be at least 1");
        }
        if let ModuleKind::Filtration { layers } = &self.kind {
            if layers.is_empty() {
                return invalid("a filtration needs at least one layer");
            }
            if layers.windows(2).any(|w| w[0].m >= w[1].m) {
                return invalid("filtration layers must be strictly increasing in m");
            }
        }
        for (m, gens) in self.layers() {
            for g in gens {
                if g.prime() != self.prime {
                    return invalid(format!("generator {g} is not over F_{}", self.prime));
                }
                if g.d() != self.d {
                    return invalid(format!("generator {g} has d = {}, expected {}", g.d(), self.d));
                }
                if g.max_summand().is_some_and(|s| s >= self.alpha) {
                    return invalid(format!("generator {g} uses a summand beyond alpha = {}", self.alpha));
                }
                let Some(deg) = g.degree() else {
                    return invalid("zero generator");
                };
                if deg == 0 {
                    return invalid(format!("generator {g} sits in degree 0; the module must be connected"));
                }
                if u64::from(m) + u64::from(deg) > u64::from(self.degree_bound) {
                    return invalid(format!(
                        "degree bound {} is below generator {g} in degree {}",
                        self.degree_bound,
                        u64::from(m) + u64::from(deg)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawDescription = toml::from_str(text).map_err(|e| Error::InvalidDescription(e.message().to_string()))?;
        let ctx = Context::new(raw.prime, raw.d, raw.alpha).map_err(|e| Error::InvalidDescription(e.to_string()))?;
        let parse_all = |gens: &[String]| -> Result<Vec<Element>> {
            gens.iter()
                .map(|g| parse_element(g, &ctx).map_err(|e| Error::InvalidDescription(format!("generator `{g}`: {e}"))))
                .collect()
        };
        let kind = match raw.kind.as_str() {
            "span" => {
                if raw.layers.is_some() {
                    return invalid("kind = \"span\" takes `generators`, not `layers`");
                }
                let gens = raw.generators.ok_or_else(|| Error::InvalidDescription("missing `generators`".into()))?;
                ModuleKind::Span { generators: parse_all(&gens)? }
            }
            "filtration" => {
                if raw.generators.is_some() {
                    return invalid("kind = \"filtration\" takes `layers`, not `generators`");
                }
                let layers = raw.layers.ok_or_else(|| Error::InvalidDescription("missing `layers`".into()))?;
                let layers = layers
                    .iter()
                    .map(|l| Ok(Layer { m: l.m, generators: parse_all(&l.generators)? }))
                    .collect::<Result<Vec<_>>>()?;
                ModuleKind::Filtration { layers }
            }
            other => return invalid(format!("unknown kind `{other}` (expected \"span\" or \"filtration\")")),
        };
        let m = ModuleDescription {
            prime: raw.prime,
            d: raw.d,
            alpha: raw.alpha,
            suspension: raw.suspension,
            kind,
            degree_bound: raw.degree_bound,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn to_toml_string(&self) -> String {
        let strings = |gens: &[Element]| gens.iter().map(ToString::to_string).collect::<Vec<_>>();
        let (kind, generators, layers) = match &self.kind {
            ModuleKind::Span { generators } => ("span", Some(strings(generators)), None),
            ModuleKind::Filtration { layers } => (
                "filtration",
                None,
                Some(layers.iter().map(|l| RawLayer { m: l.m, generators: strings(&l.generators) }).collect()),
            ),
        };
        let raw = RawDescription {
            prime: self.prime,
            d: self.d,
            alpha: self.alpha,
            suspension: self.suspension,
            degree_bound: self.degree_bound,
            kind: kind.to_string(),
            generators,
            layers,
        };
        toml::to_string(&raw).expect("descriptions serialize")
    }
}

//! JSON instances: free complexes and sheaf complexes on finite posets.
//!
//! Matrices are arrays of rows of strings, each string an element in the
//! ring's own syntax (`"-3"`, `"t^2+1"`, `"1/2"`).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{CoeffRing, FpPoly, Integers, QPoly, RingSpec};
use crate::site::{PosetSite, Restrictions, SheafComplex};

pub type MatrixJson = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub ring: RingSpec,
    pub lo: i64,
    pub hi: i64,
    pub ranks: Vec<usize>,
    /// Entry `j` is the differential from degree `lo + j` to `lo + j + 1`.
    pub differentials: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteJson {
    pub elements: Vec<String>,
    /// Generating relations `a <= b`; closed reflexively and transitively.
    pub leq: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafJson {
    pub site: SiteJson,
    pub stalks: BTreeMap<String, ComplexJson>,
    /// Keyed `"a<=b"` for every `a < b`, one matrix per degree of the
    /// common range.
    pub restrictions: BTreeMap<String, Vec<MatrixJson>>,
}

/// Either kind of instance file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceJson {
    Sheaf(SheafJson),
    Complex(ComplexJson),
}

impl ComplexJson {
    pub fn from_complex<R: CoeffRing>(k: &Complex<R>) -> Self {
        let r = k.ring();
        ComplexJson {
            ring: r.spec(),
            lo: k.lo(),
            hi: k.hi(),
            ranks: k.ranks().to_vec(),
            differentials: (k.lo()..k.hi()).map(|i| k.d(i).format(r)).collect(),
        }
    }

    /// Shape-checked but not validated: `d o d` is left to the caller.
    pub fn to_complex<R: CoeffRing>(&self, ring: &R) -> Result<Complex<R>> {
        if ring.spec() != self.ring {
            return Err(Error::InvalidRing(format!("expected {:?}, found {:?}", ring.spec(), self.ring)));
        }
        if self.hi < self.lo || self.ranks.len() as i64 != self.hi - self.lo + 1 {
            return Err(Error::ShapeMismatch(format!(
                "degrees {}..={} need {} ranks, got {}",
                self.lo,
                self.hi,
                (self.hi - self.lo + 1).max(0),
                self.ranks.len()
            )));
        }
        if self.differentials.len() + 1 != self.ranks.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} degrees need {} differentials, got {}",
                self.ranks.len(),
                self.ranks.len() - 1,
                self.differentials.len()
            )));
        }
        let diffs = self
            .differentials
            .iter()
            .enumerate()
            .map(|(j, m)| Matrix::parse(ring, m, self.ranks[j + 1], self.ranks[j]))
            .collect::<Result<Vec<_>>>()?;
        Complex::new(ring.clone(), self.lo, self.ranks.clone(), diffs)
    }
}

impl SiteJson {
    pub fn from_site(site: &PosetSite) -> Self {
        SiteJson {
            elements: site.elements().to_vec(),
            leq: site
                .strict_pairs()
                .into_iter()
                .map(|(a, b)| [site.name(a).to_string(), site.name(b).to_string()])
                .collect(),
        }
    }

    pub fn to_site(&self) -> Result<PosetSite> {
        let rel: Vec<(String, String)> = self.leq.iter().map(|[a, b]| (a.clone(), b.clone())).collect();
        PosetSite::new(self.elements.clone(), &rel)
    }
}

fn pair_key(a: &str, b: &str) -> String {
    format!("{a}<={b}")
}

impl SheafJson {
    pub fn from_sheaf<R: CoeffRing>(k: &SheafComplex<R>) -> Self {
        let site = k.site();
        let r = k.ring();
        SheafJson {
            site: SiteJson::from_site(site),
            stalks: (0..site.len())
                .map(|x| (site.name(x).to_string(), ComplexJson::from_complex(k.stalk(x))))
                .collect(),
            restrictions: k
                .restrictions()
                .iter()
                .map(|(&(x, y), maps)| {
                    (pair_key(site.name(x), site.name(y)), maps.iter().map(|m| m.format(r)).collect())
                })
                .collect(),
        }
    }

    /// Shape-checked but not validated.
    pub fn to_sheaf<R: CoeffRing>(&self, ring: &R) -> Result<SheafComplex<R>> {
        let site = self.site.to_site()?;
        for name in self.stalks.keys() {
            if site.index(name).is_none() {
                return Err(Error::Parse(format!("stalk given for unknown element {name}")));
            }
        }
        let stalks = site
            .elements()
            .iter()
            .map(|e| {
                self.stalks
                    .get(e)
                    .ok_or_else(|| Error::Parse(format!("missing stalk for {e}")))?
                    .to_complex(ring)
            })
            .collect::<Result<Vec<_>>>()?;
        let lo = stalks.iter().map(|k| k.lo()).min().unwrap_or(0);
        let widened: Vec<Complex<R>> = {
            let hi = stalks.iter().map(|k| k.hi()).max().unwrap_or(0);
            stalks.iter().map(|k| k.widen(lo, hi)).collect()
        };
        let mut res: Restrictions<R::Elem> = BTreeMap::new();
        for (key, maps) in &self.restrictions {
            let (a, b) = key
                .split_once("<=")
                .ok_or_else(|| Error::Parse(format!("restriction key {key} is not of the form a<=b")))?;
            let look = |s: &str| site.index(s.trim()).ok_or_else(|| Error::Parse(format!("unknown element {s} in {key}")));
            let (x, y) = (look(a)?, look(b)?);
            if x == y {
                continue;
            }
            let parsed = maps
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let i = lo + j as i64;
                    Matrix::parse(ring, m, widened[y].rank(i), widened[x].rank(i))
                })
                .collect::<Result<Vec<_>>>()?;
            res.insert((x, y), parsed);
        }
        SheafComplex::new_unchecked(site, stalks, res)
    }
}

/// A parsed instance over a concrete ring.
#[derive(Clone, Debug, PartialEq)]
pub enum Instance<R: CoeffRing> {
    Complex(Complex<R>),
    Sheaf(SheafComplex<R>),
}

impl<R: CoeffRing> Instance<R> {
    /// A complex is a sheaf on the one-point site.
    pub fn into_sheaf(self) -> SheafComplex<R> {
        match self {
            Instance::Complex(k) => SheafComplex::constant(PosetSite::point(), &k),
            Instance::Sheaf(s) => s,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Complex(k) => k.validate(),
            Instance::Sheaf(s) => s.validate(),
        }
    }

    pub fn to_json(&self) -> InstanceJson {
        match self {
            Instance::Complex(k) => InstanceJson::Complex(ComplexJson::from_complex(k)),
            Instance::Sheaf(s) => InstanceJson::Sheaf(SheafJson::from_sheaf(s)),
        }
    }
}

/// An instance together with its ring, resolved from the file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyInstance {
    Z(Instance<Integers>),
    FpPoly(Instance<FpPoly>),
    QPoly(Instance<QPoly>),
}

impl InstanceJson {
    pub fn ring(&self) -> Result<&RingSpec> {
        match self {
            InstanceJson::Complex(c) => Ok(&c.ring),
            InstanceJson::Sheaf(s) => s
                .stalks
                .values()
                .next()
                .map(|c| &c.ring)
                .ok_or_else(|| Error::Parse("sheaf without stalks".into())),
        }
    }

    fn resolve<R: CoeffRing>(&self, ring: &R) -> Result<Instance<R>> {
        match self {
            InstanceJson::Complex(c) => c.to_complex(ring).map(Instance::Complex),
            InstanceJson::Sheaf(s) => s.to_sheaf(ring).map(Instance::Sheaf),
        }
    }

    pub fn into_any(&self) -> Result<AnyInstance> {
        match self.ring()? {
            RingSpec::Z { xi } => {
                let p = xi.trim().parse::<u64>().map_err(|_| Error::InvalidRing(format!("xi = {xi} is not a prime number")))?;
                Ok(AnyInstance::Z(self.resolve(&Integers::new(p)?)?))
            }
            RingSpec::FpPoly { p, xi } => {
                require_t(xi)?;
                Ok(AnyInstance::FpPoly(self.resolve(&FpPoly::over_prime(*p)?)?))
            }
            RingSpec::QPoly { xi } => {
                require_t(xi)?;
                Ok(AnyInstance::QPoly(self.resolve(&QPoly::rational())?))
            }
        }
    }
}

fn require_t(xi: &str) -> Result<()> {
    if xi.trim() == "t" {
        Ok(())
    } else {
        Err(Error::InvalidRing(format!("polynomial rings use xi = t, got {xi}")))
    }
}

/// Parses an instance file; every failure here is an input error.
pub fn parse_instance(text: &str) -> Result<AnyInstance> {
    let json: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    json.into_any()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_instance, GenConfig, Profile};

    #[test]
    fn complex_round_trip() {
        let text = r#"{"ring":{"kind":"z","xi":"3"},"lo":0,"hi":1,"ranks":[1,1],"differentials":[[["3"]]]}"#;
        let AnyInstance::Z(Instance::Complex(k)) = parse_instance(text).unwrap() else {
            panic!("expected a complex over Z")
        };
        assert_eq!(serde_json::to_string(&ComplexJson::from_complex(&k)).unwrap(), text);
    }

    #[test]
    fn sheaf_round_trip() {
        let r = FpPoly::over_prime(5).unwrap();
        let k = generate_instance(&r, &PosetSite::pseudo_circle(), Profile::Free, 4, &GenConfig::default()).unwrap();
        let text = serde_json::to_string(&SheafJson::from_sheaf(&k)).unwrap();
        let AnyInstance::FpPoly(Instance::Sheaf(back)) = parse_instance(&text).unwrap() else {
            panic!("expected a sheaf over F_5[t]")
        };
        assert_eq!(back, k);
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        for text in [
            "{",
            r#"{"ring":{"kind":"z","xi":"4"},"lo":0,"hi":0,"ranks":[1],"differentials":[]}"#,
            r#"{"ring":{"kind":"z","xi":"3"},"lo":0,"hi":1,"ranks":[1,1],"differentials":[[["x"]]]}"#,
            r#"{"ring":{"kind":"q-poly","xi":"t+1"},"lo":0,"hi":0,"ranks":[1],"differentials":[]}"#,
        ] {
            assert!(parse_instance(text).unwrap_err().is_input_error(), "{text}");
        }
    }
}

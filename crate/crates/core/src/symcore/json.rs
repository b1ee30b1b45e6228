use serde::{Deserialize, Serialize};

use super::scalar::{format_rational, parse_rational, ExactScalar};
use super::symbol::{GradedSymbol, Monomial, MonomialKey};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub coeff: [String; 2],
    pub x: Vec<u32>,
    pub xi1: String,
    pub xi: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolJson {
    pub nvars: usize,
    pub order: String,
    pub window: usize,
    pub terms: Vec<TermJson>,
}

impl From<&GradedSymbol> for SymbolJson {
    fn from(s: &GradedSymbol) -> Self {
        SymbolJson {
            nvars: s.nvars(),
            order: format_rational(s.order()),
            window: s.window(),
            terms: s
                .terms()
                .map(|(_, k, c)| TermJson {
                    coeff: [format_rational(c.re()), format_rational(c.im())],
                    x: k.x.clone(),
                    xi1: format_rational(&k.xi1),
                    xi: k.xi.clone(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&SymbolJson> for GradedSymbol {
    type Error = Error;

    fn try_from(j: &SymbolJson) -> Result<Self> {
        let terms = j
            .terms
            .iter()
            .map(|t| {
                Ok(Monomial::new(
                    ExactScalar::new(parse_rational(&t.coeff[0])?, parse_rational(&t.coeff[1])?),
                    MonomialKey { x: t.x.clone(), xi1: parse_rational(&t.xi1)?, xi: t.xi.clone() },
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        GradedSymbol::from_terms(j.nvars, parse_rational(&j.order)?, j.window, terms)
    }
}

pub fn symbol_to_json(s: &GradedSymbol) -> String {
    serde_json::to_string_pretty(&SymbolJson::from(s)).expect("symbol serializes")
}

pub fn symbol_from_json(text: &str) -> Result<GradedSymbol> {
    GradedSymbol::try_from(&parse_json::<SymbolJson>(text)?)
}

/// Deserializes `text`, reporting the JSON path of the first schema violation.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Parse { path: e.path().to_string(), message: e.inner().to_string() })
}

#[cfg(test)]
mod tests {
    use super::super::scalar::rat;
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let p = GradedSymbol::xi1_pow(2, rat(-7, 3), 3).unwrap();
        let q = GradedSymbol::x(2, 1, 3).unwrap().raise_order(0);
        let s = p.add(&p.scale(&ExactScalar::new(rat(1, 2), rat(-3, 4)))).unwrap();
        for sym in [s, q] {
            let text = symbol_to_json(&sym);
            let back = symbol_from_json(&text).unwrap();
            assert_eq!(back, sym);
            assert_eq!(symbol_to_json(&back), text);
        }
    }

    #[test]
    fn reports_path() {
        let err = symbol_from_json(r#"{"nvars":1,"order":"0/1","window":"x","terms":[]}"#).unwrap_err();
        match err {
            Error::Parse { path, .. } => assert_eq!(path, "window"),
            other => panic!("unexpected {other:?}"),
        }
    }
}

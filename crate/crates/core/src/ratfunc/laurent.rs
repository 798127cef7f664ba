use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use super::{format_terms, parse_int_map, serialize_int_map, RatFunc};

/// An integer Laurent polynomial in `t`, keyed by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn from_map(mut terms: BTreeMap<i64, BigInt>) -> LaurentPoly {
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<i64, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        RatFunc::from_terms(
            self.terms
                .iter()
                .map(|(&e, c)| (e, BigRational::from_integer(c.clone()))),
        )
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(i64, BigRational)> = self
            .terms
            .iter()
            .map(|(&e, c)| (e, BigRational::from_integer(c.clone())))
            .collect();
        write!(f, "{}", format_terms(&terms))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_int_map(&self.terms, s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<LaurentPoly, D::Error> {
        let raw = BTreeMap::<String, serde_json::Value>::deserialize(d)?;
        parse_int_map(&raw)
            .map(LaurentPoly::from_map)
            .map_err(de::Error::custom)
    }
}

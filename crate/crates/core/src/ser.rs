//! Serde helpers: every integer and rational is written as a decimal string
//! so that consumers with 64-bit numbers never truncate.

use num_bigint::BigInt;
use serde::Serializer;

use crate::arith::Rat;

pub fn big<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn rat<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn rat_str(x: &Rat) -> String {
    x.to_string()
}

pub fn rats(xs: &[Rat]) -> Vec<String> {
    xs.iter().map(rat_str).collect()
}

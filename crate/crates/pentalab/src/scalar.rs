//! Exact rational scalars and their string form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// The default field: arbitrary-precision rationals, always kept reduced.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let v: Q = t
        .parse()
        .map_err(|_| Error::InvalidInput(format!("not a rational: {t:?}")))?;
    if v.denom().is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator: {t:?}")));
    }
    Ok(v)
}

/// `"p/q"`, or `"p"` when the denominator is one.
pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// A nonzero rational with numerator in `[-bound, bound]` and denominator in
/// `[1, bound]`.
pub fn random_q<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Q {
    loop {
        let n = rng.gen_range(-bound..=bound);
        if n != 0 {
            return qr(n, rng.gen_range(1..=bound));
        }
    }
}

pub fn product<'a, I: IntoIterator<Item = &'a Q>>(it: I) -> Q {
    it.into_iter().fold(Q::one(), |acc, x| acc * x)
}

pub fn pow(x: &Q, e: u32) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

/// Exact `k`-th root of a rational, if one exists.
pub fn exact_root(x: &Q, k: u32) -> Option<Q> {
    if k == 0 {
        return None;
    }
    if x.is_zero() {
        return Some(Q::zero());
    }
    if x.is_negative() && k % 2 == 0 {
        return None;
    }
    let root = |b: &BigInt| -> Option<BigInt> {
        let r = b.abs().nth_root(k);
        if num_traits::pow(r.clone(), k as usize) == b.abs() {
            Some(if b.is_negative() { -r } else { r })
        } else {
            None
        }
    };
    Some(Q::new(root(x.numer())?, root(x.denom())?))
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_q {
    use super::{fmt_q, parse_q, Q};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_q(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter().map(|s| parse_q(s).map_err(D::Error::custom)).collect()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_some(&fmt_q(v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
            let v = Option::<String>::deserialize(d)?;
            v.map(|s| parse_q(&s).map_err(D::Error::custom)).transpose()
        }
    }
}

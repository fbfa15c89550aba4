//! Exact Laurent polynomials with arbitrary-precision integer coefficients.
//!
//! Variables are numbered from 1, so `x1` is the first variable. In cluster
//! expansions the variable `xi` belongs to the arc `τi` of the initial
//! triangulation (internal arcs first, then boundary arcs).
//!
//! Terms live in a `BTreeMap` keyed by [`Exponents`], which orders exponent
//! vectors lexicographically as dense vectors. The map never stores a zero
//! coefficient, so the representation is canonical and derived equality is
//! mathematical equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("zero polynomial has no reduced fraction form")]
    ZeroFraction,
    #[error("cannot substitute into negative powers of x{0}")]
    NegativeSubstitution(u32),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Sparse exponent vector: `(variable, exponent)` pairs sorted by variable,
/// with no zero exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Exponents(Vec<(u32, i32)>);

impl Exponents {
    pub fn one() -> Self {
        Exponents(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Exponents(vec![(v, 1)])
    }

    /// Builds an exponent vector from arbitrary pairs, merging duplicates and
    /// dropping zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, i32)>) -> Self {
        let mut map: BTreeMap<u32, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Exponents(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: u32) -> i32 {
        self.0
            .binary_search_by_key(&v, |&(var, _)| var)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.0.iter().copied()
    }

    /// Total degree (sum of exponents).
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    fn combine(&self, other: &Exponents, sign: i32) -> Exponents {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let a = self.0.get(i);
            let b = other.0.get(j);
            match (a, b) {
                (Some(&(va, ea)), Some(&(vb, eb))) if va == vb => {
                    let e = ea + sign * eb;
                    if e != 0 {
                        out.push((va, e));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(va, ea)), Some(&(vb, _))) if va < vb => {
                    out.push((va, ea));
                    i += 1;
                }
                (Some(_), Some(&(vb, eb))) => {
                    out.push((vb, sign * eb));
                    j += 1;
                }
                (Some(&(va, ea)), None) => {
                    out.push((va, ea));
                    i += 1;
                }
                (None, Some(&(vb, eb))) => {
                    out.push((vb, sign * eb));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Exponents(out)
    }

    pub fn mul(&self, other: &Exponents) -> Exponents {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Exponents) -> Exponents {
        self.combine(other, -1)
    }

    pub fn pow(&self, k: i32) -> Exponents {
        if k == 0 {
            return Exponents::one();
        }
        Exponents(self.0.iter().map(|&(v, e)| (v, e * k)).collect())
    }

    /// Variables with a negative exponent.
    pub fn negative_support(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().filter(|&&(_, e)| e < 0).map(|&(v, _)| v)
    }
}

impl Ord for Exponents {
    /// Lexicographic order of the dense exponent vectors `(e_1, e_2, ...)`.
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.0.get(i);
            let b = other.0.get(j);
            let (va, ea) = a.map_or((u32::MAX, 0), |&p| p);
            let (vb, eb) = b.map_or((u32::MAX, 0), |&p| p);
            if a.is_none() && b.is_none() {
                return Ordering::Equal;
            }
            // The first differing coordinate is the smaller variable index
            // present in either vector.
            match va.cmp(&vb) {
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    ord => return ord,
                },
                Ordering::Less => return ea.cmp(&0),
                Ordering::Greater => return 0.cmp(&eb),
            }
        }
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "x{v}")?;
            } else {
                write!(f, "x{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A single term `coeff * x^exponents`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigInt,
    pub exponents: Exponents,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponents, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), Exponents::one())
    }

    pub fn var(v: u32) -> Self {
        Self::monomial(BigInt::one(), Exponents::var(v))
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c.into(), Exponents::one())
    }

    pub fn monomial(coeff: BigInt, exponents: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponents, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|(e, c)| Monomial {
                coeff: c.clone(),
                exponents: e.clone(),
            })
            .collect()
    }

    pub fn coefficient(&self, e: &Exponents) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale_monomial(&self, coeff: &BigInt, e: &Exponents) -> LaurentPoly {
        if coeff.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(e), c * coeff))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Whether every coefficient is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn all_coefficients_one(&self) -> bool {
        self.terms.values().all(|c| c.is_one())
    }

    /// Variables occurring anywhere in the polynomial.
    pub fn support(&self) -> std::collections::BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|e| e.iter().map(|(v, _)| v))
            .collect()
    }

    /// Value at `x_i = 1` for every variable, i.e. the sum of coefficients.
    pub fn coefficient_sum(&self) -> BigInt {
        self.terms.values().sum()
    }

    fn leading(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Per-variable (min, max) exponent over all terms, with absent
    /// variables counting as exponent 0.
    fn exponent_bounds(&self) -> BTreeMap<u32, (i32, i32)> {
        let vars = self.support();
        let mut out = BTreeMap::new();
        for v in vars {
            let mut lo = i32::MAX;
            let mut hi = i32::MIN;
            for e in self.terms.keys() {
                let x = e.get(v);
                lo = lo.min(x);
                hi = hi.max(x);
            }
            out.insert(v, (lo, hi));
        }
        out
    }

    /// Exact division in the Laurent ring.
    ///
    /// Runs leading-term division under the lex order. Exponents of the
    /// quotient are confined to a box determined by the per-variable degree
    /// ranges of `self` and `divisor`, which bounds the loop.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        if divisor.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if divisor.len() == 1 {
            let (e, c) = divisor.leading().unwrap();
            let mut out = BTreeMap::new();
            for (k, v) in &self.terms {
                let (q, r) = num_integer_div_rem(v, c);
                if !r.is_zero() {
                    return Err(LaurentError::NotDivisible);
                }
                out.insert(k.div(e), q);
            }
            return Ok(LaurentPoly { terms: out });
        }

        let pb = self.exponent_bounds();
        let db = divisor.exponent_bounds();
        let mut allowed: BTreeMap<u32, (i32, i32)> = BTreeMap::new();
        for v in pb.keys().chain(db.keys()) {
            let (plo, phi) = pb.get(v).copied().unwrap_or((0, 0));
            let (dlo, dhi) = db.get(v).copied().unwrap_or((0, 0));
            allowed.insert(*v, (plo - dlo, phi - dhi));
        }
        let in_box = |e: &Exponents| {
            allowed.iter().all(|(&v, &(lo, hi))| {
                let x = e.get(v);
                lo <= x && x <= hi
            }) && e.iter().all(|(v, _)| allowed.contains_key(&v))
        };

        let (lead_e, lead_c) = divisor.leading().unwrap();
        let lead_e = lead_e.clone();
        let lead_c = lead_c.clone();
        let mut rem = self.clone();
        let mut quotient = LaurentPoly::zero();
        while let Some((re, rc)) = rem.leading() {
            let (qc, r) = num_integer_div_rem(rc, &lead_c);
            if !r.is_zero() {
                return Err(LaurentError::NotDivisible);
            }
            let qe = re.div(&lead_e);
            if !in_box(&qe) {
                return Err(LaurentError::NotDivisible);
            }
            let step = divisor.scale_monomial(&qc, &qe);
            rem = &rem - &step;
            quotient.add_term(qe, qc);
        }
        Ok(quotient)
    }

    /// Writes `self = numerator / x^denominator` with a polynomial numerator
    /// that no denominator variable divides.
    pub fn reduced_fraction_form(&self) -> Result<(LaurentPoly, Exponents), LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroFraction);
        }
        let bounds = self.exponent_bounds();
        let denominator = Exponents::from_pairs(
            bounds
                .iter()
                .filter(|(_, &(lo, _))| lo < 0)
                .map(|(&v, &(lo, _))| (v, -lo)),
        );
        let numerator = self.scale_monomial(&BigInt::one(), &denominator);
        Ok((numerator, denominator))
    }

    /// Replaces `x_var` by `value`. The variable must occur with
    /// non-negative exponents only.
    pub fn substitute(&self, var: u32, value: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        let mut powers: Vec<LaurentPoly> = vec![LaurentPoly::one()];
        let mut out = LaurentPoly::zero();
        for (e, c) in &self.terms {
            let k = e.get(var);
            if k < 0 {
                return Err(LaurentError::NegativeSubstitution(var));
            }
            if k == 0 {
                out.add_term(e.clone(), c.clone());
                continue;
            }
            while powers.len() <= k as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = e.div(&Exponents::var(var).pow(k));
            let term = powers[k as usize].scale_monomial(c, &rest);
            out = &out + &term;
        }
        Ok(out)
    }

    /// Replaces variables according to `map` (monomial re-indexing).
    pub fn rename(&self, map: impl Fn(u32) -> u32) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| {
            (
                Exponents::from_pairs(e.iter().map(|(v, x)| (map(v), x))),
                c.clone(),
            )
        }))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(JsonPoly::from(self)).expect("polynomial serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<LaurentPoly, LaurentError> {
        let terms: Vec<JsonTerm> =
            serde_json::from_value(value.clone()).map_err(|e| LaurentError::Parse(e.to_string()))?;
        let mut p = LaurentPoly::zero();
        for t in terms {
            let c = match t.c {
                JsonCoeff::Int(i) => BigInt::from(i),
                JsonCoeff::Text(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| LaurentError::Parse(e.to_string()))?,
            };
            let mut pairs = Vec::new();
            for (k, v) in t.e {
                let var = k
                    .parse::<u32>()
                    .map_err(|e| LaurentError::Parse(format!("variable {k}: {e}")))?;
                pairs.push((var, v));
            }
            p.add_term(Exponents::from_pairs(pairs), c);
        }
        Ok(p)
    }
}

fn num_integer_div_rem(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    (a / b, a % b)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonCoeff {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    c: JsonCoeff,
    e: BTreeMap<String, i32>,
}

#[derive(Serialize)]
#[serde(transparent)]
struct JsonPoly(Vec<JsonTerm>);

impl From<&LaurentPoly> for JsonPoly {
    fn from(p: &LaurentPoly) -> Self {
        JsonPoly(
            p.terms
                .iter()
                .rev()
                .map(|(e, c)| JsonTerm {
                    c: match c.to_i64() {
                        Some(i) => JsonCoeff::Int(i),
                        None => JsonCoeff::Text(c.to_string()),
                    },
                    e: e.iter().map(|(v, x)| (v.to_string(), x)).collect(),
                })
                .collect(),
        )
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in descending canonical order, e.g. `2*x2*x4*x1^-2 + x6*x8*x1^-1`
    /// is printed with variables in increasing index: `2*x1^-2*x2*x4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{e}")?;
            } else {
                write!(f, "{mag}*{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(LaurentError::Parse("empty input".into()));
        }
        // Split into signed terms; a '-' directly after '^' is an exponent sign.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && prev != Some('^') {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                } else if prev.is_some() && prev != Some('+') && prev != Some('-') {
                    return Err(LaurentError::Parse(format!("unexpected sign in {s:?}")));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
            prev = Some(ch);
        }
        if current.is_empty() {
            return Err(LaurentError::Parse(format!("dangling sign in {s:?}")));
        }
        terms.push((negative, current));

        let mut out = LaurentPoly::zero();
        for (neg, body) in terms {
            let mut coeff = BigInt::one();
            let mut pairs = Vec::new();
            for factor in body.split('*') {
                if factor.is_empty() {
                    return Err(LaurentError::Parse(format!("empty factor in {body:?}")));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, exp) = match rest.split_once('^') {
                        Some((v, e)) => (v, e),
                        None => (rest, "1"),
                    };
                    let var: u32 = var
                        .parse()
                        .map_err(|_| LaurentError::Parse(format!("bad variable {factor:?}")))?;
                    let exp: i32 = exp
                        .parse()
                        .map_err(|_| LaurentError::Parse(format!("bad exponent {factor:?}")))?;
                    pairs.push((var, exp));
                } else {
                    let c: BigInt = factor
                        .parse()
                        .map_err(|_| LaurentError::Parse(format!("bad coefficient {factor:?}")))?;
                    coeff *= c;
                }
            }
            if neg {
                coeff = -coeff;
            }
            out.add_term(Exponents::from_pairs(pairs), coeff);
        }
        Ok(out)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.mul(eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| &acc + &p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("x1 + x2");
        let b = p("x1 - x2");
        assert_eq!(&a * &b, p("x1^2 - x2^2"));
    }

    #[test]
    fn divide_by_monomial() {
        assert_eq!(p("x1*x2 + x2^2").exact_div(&p("x2")).unwrap(), p("x1 + x2"));
    }

    #[test]
    fn non_divisible_is_rejected() {
        assert_eq!(
            p("x1 + x2").exact_div(&p("x3")).unwrap(),
            p("x1*x3^-1 + x2*x3^-1"),
            "division by a monomial always succeeds in the Laurent ring"
        );
        assert_eq!(
            p("x1 + x2").exact_div(&p("x1 + x3")),
            Err(LaurentError::NotDivisible)
        );
        assert_eq!(p("x1").exact_div(&p("2")), Err(LaurentError::NotDivisible));
    }

    #[test]
    fn general_exact_division() {
        let a = p("x1*x3^-1 + x2 + 3*x4^-2");
        let b = p("x1 - x5 + x2*x3");
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&b).unwrap(), a);
        assert_eq!(prod.exact_div(&a).unwrap(), b);
    }

    #[test]
    fn reduced_fraction_of_single_terms() {
        let (num, den) = p("x7*x11*x3^-1").reduced_fraction_form().unwrap();
        assert_eq!(num, p("x7*x11"));
        assert_eq!(den, Exponents::var(3));
        let (num, den) = p("x5").reduced_fraction_form().unwrap();
        assert_eq!(num, p("x5"));
        assert!(den.is_one());
        assert_eq!(
            LaurentPoly::zero().reduced_fraction_form(),
            Err(LaurentError::ZeroFraction)
        );
    }

    #[test]
    fn printing_is_canonical() {
        let q = p("x3^-1*x7*x11 + 2*x1^-2*x2 - x4 + 5");
        assert_eq!(q.to_string(), "-x4 + 5 + x3^-1*x7*x11 + 2*x1^-2*x2");
        assert_eq!(q.to_string().parse::<LaurentPoly>().unwrap(), q);
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn json_form() {
        let q = p("2*x1^-2*x3^-1*x2 + x5");
        let v = q.to_json();
        assert_eq!(
            v,
            serde_json::json!([{"c":1,"e":{"5":1}},{"c":2,"e":{"1":-2,"2":1,"3":-1}}])
        );
        assert_eq!(LaurentPoly::from_json(&v).unwrap(), q);
        let big = p("123456789012345678901234567890*x1");
        assert_eq!(LaurentPoly::from_json(&big.to_json()).unwrap(), big);
    }

    #[test]
    fn dense_lex_order() {
        // (0, 1) < (1, -5) < (1, 0)
        let a = Exponents::from_pairs([(2, 1)]);
        let b = Exponents::from_pairs([(1, 1), (2, -5)]);
        let c = Exponents::from_pairs([(1, 1)]);
        assert!(a < b && b < c);
        assert!(Exponents::from_pairs([(1, -1)]) < Exponents::one());
    }

    #[test]
    fn substitution() {
        let q = p("x1^2*x3^-1 + x2");
        let r = q.substitute(1, &p("x4 + 1")).unwrap();
        assert_eq!(r, p("x4^2*x3^-1 + 2*x4*x3^-1 + x3^-1 + x2"));
        assert!(q.substitute(3, &p("x4")).is_err());
    }
}

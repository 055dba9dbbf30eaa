//! Exact coefficient rings.
//!
//! `LaurentDelta` is the ring of Laurent polynomials in the central parameter
//! `d` with integer coefficients; it is the coefficient ring of the Brauer
//! algebra.  `RElem` is the coefficient ring of the BMW algebra: the subring
//! of `Q(d)[l, l^-1]` generated by `l`, `l^-1`, `d`, `d^-1` and
//! `m = (l^-1 - l)/(d - 1)`.  An `RElem` is stored per power of `l` as a
//! reduced fraction of integer polynomials in `d`, so equality is structural
//! and all arithmetic is exact.  The specialization `mu` sends `l -> 1`
//! (hence `m -> 0`) and lands in `LaurentDelta` exactly when every
//! denominator cancels.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Coefficient-ring interface used by the generic element container.
///
/// Implemented by `LaurentDelta` (Brauer side) and `RElem` (BMW side).  All
/// arithmetic is exact; there is deliberately no floating-point instance.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// The image of the central parameter power `d^k`.
    fn delta_pow(k: i32) -> Self;
}

// ---------------------------------------------------------------------------
// Laurent polynomials in d over Z
// ---------------------------------------------------------------------------

/// A Laurent polynomial in `d` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LaurentDelta {
    lo: i32,
    coeffs: Vec<BigInt>, // coeffs[k] multiplies d^(lo+k); ends are nonzero unless empty
}

impl LaurentDelta {
    fn norm(mut lo: i32, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
            lo += lead_zeros as i32;
        }
        if coeffs.is_empty() {
            lo = 0;
        }
        LaurentDelta { lo, coeffs }
    }

    pub fn zero() -> Self {
        LaurentDelta::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * d^k`.
    pub fn monomial(c: i64, k: i32) -> Self {
        Self::norm(k, vec![BigInt::from(c)])
    }

    pub fn delta_pow(k: i32) -> Self {
        Self::monomial(1, k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.lo == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Coefficient of `d^k`.
    pub fn coeff(&self, k: i32) -> BigInt {
        let idx = k as i64 - self.lo as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Exponent range as `(lowest, highest)`, or `None` for zero.
    pub fn span(&self) -> Option<(i32, i32)> {
        if self.is_zero() {
            None
        } else {
            Some((self.lo, self.lo + self.coeffs.len() as i32 - 1))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.coeffs.len() as i32).max(other.lo + other.coeffs.len() as i32);
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lo - lo) as usize + k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.lo - lo) as usize + k] += c;
        }
        Self::norm(lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        LaurentDelta {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::norm(self.lo + other.lo, coeffs)
    }

    pub fn mul_delta_pow(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentDelta {
            lo: self.lo + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Terms as `(exponent, coefficient)` in descending exponent order.
    pub fn terms(&self) -> Vec<(i32, BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (self.lo + k as i32, c.clone()))
            .collect()
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &[(i32, BigInt)], var: &str) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (idx, (exp, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        if idx == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let a = c.abs();
        let show_var = *exp != 0;
        if !show_var {
            write!(f, "{a}")?;
        } else {
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            if *exp == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{exp}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for LaurentDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms(), "d")
    }
}

impl FromStr for LaurentDelta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty coefficient".into()));
        }
        let bad = |t: &str| Error::Parse(format!("bad coefficient term '{t}'"));
        let mut out = LaurentDelta::zero();
        let mut rest = compact.as_str();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        while !rest.is_empty() {
            // Split at the next top-level +/-; a minus directly after '^'
            // belongs to an exponent like d^-2.
            let bytes = rest.as_bytes();
            let mut split = rest.len();
            for i in 1..bytes.len() {
                let c = bytes[i];
                if (c == b'+' || c == b'-') && bytes[i - 1] != b'^' {
                    split = i;
                    break;
                }
            }
            let (term, tail) = rest.split_at(split);
            let (num_part, exp) = if let Some(pos) = term.find('d') {
                let n = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
                let e = &term[pos + 1..];
                let exp = if e.is_empty() {
                    1
                } else {
                    e.strip_prefix('^')
                        .ok_or_else(|| bad(term))?
                        .parse::<i32>()
                        .map_err(|_| bad(term))?
                };
                (n, exp)
            } else {
                (term, 0)
            };
            let c: i64 = if num_part.is_empty() {
                1
            } else {
                num_part.parse().map_err(|_| bad(term))?
            };
            out = out.add(&LaurentDelta::monomial(sign * c, exp));
            if tail.is_empty() {
                break;
            }
            sign = if tail.starts_with('-') { -1 } else { 1 };
            rest = &tail[1..];
        }
        Ok(out)
    }
}

impl std::ops::Add for LaurentDelta {
    type Output = LaurentDelta;
    fn add(self, rhs: LaurentDelta) -> LaurentDelta {
        LaurentDelta::add(&self, &rhs)
    }
}

impl std::ops::Mul for LaurentDelta {
    type Output = LaurentDelta;
    fn mul(self, rhs: LaurentDelta) -> LaurentDelta {
        LaurentDelta::mul(&self, &rhs)
    }
}

impl num_traits::Zero for LaurentDelta {
    fn zero() -> Self {
        LaurentDelta::zero()
    }
    fn is_zero(&self) -> bool {
        LaurentDelta::is_zero(self)
    }
}

impl num_traits::One for LaurentDelta {
    fn one() -> Self {
        LaurentDelta::one()
    }
}

impl Coeff for LaurentDelta {
    fn zero() -> Self {
        LaurentDelta::zero()
    }
    fn one() -> Self {
        LaurentDelta::one()
    }
    fn is_zero(&self) -> bool {
        LaurentDelta::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        LaurentDelta::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentDelta::mul(self, other)
    }
    fn neg(&self) -> Self {
        LaurentDelta::neg(self)
    }
    fn delta_pow(k: i32) -> Self {
        LaurentDelta::delta_pow(k)
    }
}

// ---------------------------------------------------------------------------
// Integer polynomials in d (non-negative powers), used inside fractions
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Default)]
struct ZPoly(Vec<BigInt>); // ascending powers, no trailing zeros

impl ZPoly {
    fn norm(mut v: Vec<BigInt>) -> Self {
        while v.last().map_or(false, |c| c.is_zero()) {
            v.pop();
        }
        ZPoly(v)
    }

    fn zero() -> Self {
        ZPoly(Vec::new())
    }

    fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    fn constant(c: BigInt) -> Self {
        Self::norm(vec![c])
    }

    fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        Self::norm(v)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn leading(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    fn add(&self, other: &Self) -> Self {
        let mut v = vec![BigInt::zero(); self.0.len().max(other.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            v[i] += c;
        }
        Self::norm(v)
    }

    fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::norm(v)
    }

    fn scale(&self, c: &BigInt) -> Self {
        Self::norm(self.0.iter().map(|a| a * c).collect())
    }

    /// gcd of all coefficients (non-negative; 0 for the zero polynomial).
    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }

    fn div_int_exact(&self, c: &BigInt) -> Self {
        ZPoly(
            self.0
                .iter()
                .map(|a| {
                    let (q, r) = a.div_rem(c);
                    assert!(r.is_zero(), "inexact integer division in polynomial");
                    q
                })
                .collect(),
        )
    }

    fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        self.div_int_exact(&g)
    }

    /// Exact division, panics if not exact (internal use only).
    fn div_exact(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let mut r = self.0.clone();
        let db = b.deg();
        let lb = b.leading();
        let mut q = vec![BigInt::zero(); self.0.len().saturating_sub(db)];
        let mut top = r.len();
        while top > db {
            let lr = r[top - 1].clone();
            if lr.is_zero() {
                top -= 1;
                continue;
            }
            let (c, rem) = lr.div_rem(&lb);
            assert!(rem.is_zero(), "inexact polynomial division");
            let shift = top - 1 - db;
            q[shift] = c.clone();
            for (i, bc) in b.0.iter().enumerate() {
                r[shift + i] -= &c * bc;
            }
            top -= 1;
        }
        assert!(r.iter().all(|c| c.is_zero()), "inexact polynomial division");
        Self::norm(q)
    }

    fn terms_desc(&self) -> Vec<(i32, BigInt)> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k as i32, c.clone()))
            .collect()
    }
}

fn poly_gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut a = a.primitive();
    let mut b = b.primitive();
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    if a.deg() < b.deg() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        if b.deg() == 0 {
            return ZPoly::one(); // nonzero constant divides only via content, already stripped
        }
        let r = pseudo_rem_clean(&a, &b);
        a = b;
        b = r.primitive();
        if !b.is_zero() && a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
    }
    a.primitive()
}

fn pseudo_rem_clean(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut r = a.clone();
    let db = b.deg();
    let lb = b.leading();
    while !r.is_zero() && r.deg() >= db {
        let shift = r.deg() - db;
        let lr = r.leading();
        r = r.scale(&lb).sub(&b.mul(&ZPoly::monomial(lr, shift)));
    }
    r
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms_desc(), "d")
    }
}

// ---------------------------------------------------------------------------
// Reduced fractions of integer polynomials in d
// ---------------------------------------------------------------------------

/// A reduced fraction `num/den` of integer polynomials in `d`.
///
/// Normal form: `gcd(num, den)` is trivial both as polynomials and as integer
/// content, and the leading coefficient of `den` is positive.  The zero value
/// is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: ZPoly,
    den: ZPoly,
}

impl RatFunc {
    fn new(num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc {
                num: ZPoly::zero(),
                den: ZPoly::one(),
            };
        }
        let g = poly_gcd(&num, &den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        let ci = num.content().gcd(&den.content());
        if !ci.is_one() {
            num = num.div_int_exact(&ci);
            den = den.div_int_exact(&ci);
        }
        if den.leading().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc {
            num: ZPoly::constant(BigInt::from(c)),
            den: ZPoly::one(),
        }
    }

    /// `c * d^k / (d - 1)^j` building block (k >= 0, j >= 0).
    fn monomial_over(c: i64, k: usize, j: u32) -> Self {
        let mut den = ZPoly::one();
        let dm1 = ZPoly::norm(vec![BigInt::from(-1), BigInt::from(1)]);
        for _ in 0..j {
            den = den.mul(&dm1);
        }
        RatFunc::new(ZPoly::monomial(BigInt::from(c), k), den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFunc::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// Interpret as a Laurent polynomial in `d` if the denominator is
    /// (up to sign) a power of `d` whose content divides the numerator.
    fn to_laurent(&self) -> Result<LaurentDelta, Error> {
        if self.is_zero() {
            return Ok(LaurentDelta::zero());
        }
        let nz: Vec<usize> = self
            .den
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect();
        if nz.len() != 1 {
            return Err(Error::NotInImage(format!(
                "denominator ({}) is not a monomial in d",
                self.den
            )));
        }
        let v = nz[0];
        let c = self.den.0[v].clone();
        let mut out = LaurentDelta::zero();
        for (k, a) in self.num.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (q, r) = a.div_rem(&c);
            if !r.is_zero() {
                return Err(Error::NotInImage(format!(
                    "coefficient {} not divisible by {}",
                    a, c
                )));
            }
            out = out.add(&LaurentDelta {
                lo: k as i32 - v as i32,
                coeffs: vec![q],
            });
        }
        Ok(LaurentDelta::norm(out.lo, out.coeffs))
    }

    /// Substitute `d -> 1` (used by unit checks, not by `mu`).
    pub fn eval_at_one(&self) -> Option<BigInt> {
        let n: BigInt = self.num.0.iter().sum();
        let d: BigInt = self.den.0.iter().sum();
        if d.is_zero() {
            return None;
        }
        let (q, r) = n.div_rem(&d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

// ---------------------------------------------------------------------------
// The coefficient ring of the BMW algebra
// ---------------------------------------------------------------------------

/// An element of the BMW coefficient ring, stored as a map from the power of
/// `l` to a reduced rational function in `d`.
///
/// The ring is generated by `l^{+-1}`, `d^{+-1}` and
/// `m = (l^-1 - l)/(d - 1)`; every product of generators expands to this
/// shape, denominators staying powers of `d` and `d - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RElem {
    terms: BTreeMap<i32, RatFunc>, // l-exponent -> coefficient; no zero values
}

impl RElem {
    fn norm(terms: BTreeMap<i32, RatFunc>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        RElem { terms }
    }

    pub fn zero() -> Self {
        RElem::default()
    }

    pub fn one() -> Self {
        Self::from_ratfunc(RatFunc::one(), 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_ratfunc(RatFunc::from_int(c), 0)
    }

    /// `f * l^k`.
    pub fn from_ratfunc(f: RatFunc, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(k, f);
        }
        RElem { terms }
    }

    pub fn l_pow(k: i32) -> Self {
        Self::from_ratfunc(RatFunc::one(), k)
    }

    pub fn delta_pow(k: i32) -> Self {
        let f = if k >= 0 {
            RatFunc::monomial_over(1, k as usize, 0)
        } else {
            RatFunc::new(ZPoly::one(), ZPoly::monomial(BigInt::one(), (-k) as usize))
        };
        Self::from_ratfunc(f, 0)
    }

    pub fn from_laurent(a: &LaurentDelta) -> Self {
        let mut f = RatFunc::zero();
        for (k, c) in a.terms() {
            let t = if k >= 0 {
                RatFunc {
                    num: ZPoly::monomial(c, k as usize),
                    den: ZPoly::one(),
                }
            } else {
                RatFunc::new(ZPoly::constant(c), ZPoly::monomial(BigInt::one(), (-k) as usize))
            };
            f = f.add(&t);
        }
        Self::from_ratfunc(f, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |f| *f == RatFunc::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(RatFunc::zero);
            *entry = entry.add(c);
        }
        Self::norm(terms)
    }

    pub fn neg(&self) -> Self {
        RElem {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<i32, RatFunc> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let k = ka + kb;
                let c = ca.mul(cb);
                let entry = terms.entry(k).or_insert_with(RatFunc::zero);
                *entry = entry.add(&c);
            }
        }
        Self::norm(terms)
    }

    pub fn mul_int(&self, c: i64) -> Self {
        self.mul(&RElem::from_int(c))
    }

    /// Specialize `l -> 1`; the image must be a Laurent polynomial in `d`.
    pub fn mu(&self) -> Result<LaurentDelta, Error> {
        let mut total = RatFunc::zero();
        for c in self.terms.values() {
            total = total.add(c);
        }
        total.to_laurent()
    }

    /// Terms as `(l-exponent, coefficient)` in ascending exponent order.
    pub fn l_terms(&self) -> impl Iterator<Item = (&i32, &RatFunc)> {
        self.terms.iter()
    }
}

/// The parameter `m = (l^-1 - l)/(d - 1)`.
pub fn m_value() -> RElem {
    let over = RatFunc::monomial_over(1, 0, 1); // 1/(d-1)
    let mut terms = BTreeMap::new();
    terms.insert(-1, over.clone());
    terms.insert(1, over.neg());
    RElem { terms }
}

/// Specialize an `RElem` at `l = 1` as a `LaurentDelta`; errors with
/// `NotInImage` when the result is not a Laurent polynomial in `d`.
pub fn mu_specialize(a: &RElem) -> Result<LaurentDelta, Error> {
    a.mu()
}

impl fmt::Display for RElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if *k == 0 {
                write!(f, "{c}")?;
            } else {
                if c.den.is_one() && c.num.terms_desc().len() > 1 {
                    write!(f, "({c})*")?;
                } else {
                    write!(f, "{c}*")?;
                }
                if *k == 1 {
                    write!(f, "l")?;
                } else {
                    write!(f, "l^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl std::ops::Add for RElem {
    type Output = RElem;
    fn add(self, rhs: RElem) -> RElem {
        RElem::add(&self, &rhs)
    }
}

impl std::ops::Mul for RElem {
    type Output = RElem;
    fn mul(self, rhs: RElem) -> RElem {
        RElem::mul(&self, &rhs)
    }
}

impl num_traits::Zero for RElem {
    fn zero() -> Self {
        RElem::zero()
    }
    fn is_zero(&self) -> bool {
        RElem::is_zero(self)
    }
}

impl num_traits::One for RElem {
    fn one() -> Self {
        RElem::one()
    }
}

impl Coeff for RElem {
    fn zero() -> Self {
        RElem::zero()
    }
    fn one() -> Self {
        RElem::one()
    }
    fn is_zero(&self) -> bool {
        RElem::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        RElem::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        RElem::mul(self, other)
    }
    fn neg(&self) -> Self {
        RElem::neg(self)
    }
    fn delta_pow(k: i32) -> Self {
        RElem::delta_pow(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(k: i32) -> LaurentDelta {
        LaurentDelta::delta_pow(k)
    }

    #[test]
    fn laurent_ring_ops() {
        let a = d(1).sub(&LaurentDelta::one()); // d - 1
        let b = d(1).add(&LaurentDelta::one()); // d + 1
        let p = a.mul(&b);
        assert_eq!(p, d(2).sub(&LaurentDelta::one()));
        assert_eq!(d(-2).mul(&d(2)), LaurentDelta::one());
        assert!(a.sub(&a).is_zero());
        assert_eq!(LaurentDelta::monomial(3, -1).coeff(-1), BigInt::from(3));
    }

    #[test]
    fn laurent_display_parse_roundtrip() {
        let cases = [
            LaurentDelta::zero(),
            LaurentDelta::one(),
            d(-2),
            LaurentDelta::monomial(-3, 1).add(&LaurentDelta::from_int(5)),
            d(3).sub(&LaurentDelta::monomial(2, 1)).add(&d(-1)),
        ];
        for c in &cases {
            let s = c.to_string();
            let back: LaurentDelta = s.parse().unwrap();
            assert_eq!(&back, c, "roundtrip failed for '{s}'");
        }
        let parsed: LaurentDelta = "d^2 - 2*d + 1".parse().unwrap();
        let dm1 = d(1).sub(&LaurentDelta::one());
        assert_eq!(parsed, dm1.mul(&dm1));
    }

    #[test]
    fn ratfunc_reduction() {
        // (d^2 - 1)/(d - 1) reduces to d + 1
        let num = ZPoly::norm(vec![BigInt::from(-1), BigInt::zero(), BigInt::from(1)]);
        let den = ZPoly::norm(vec![BigInt::from(-1), BigInt::from(1)]);
        let f = RatFunc::new(num, den);
        assert!(f.den.is_one());
        assert_eq!(f.num, ZPoly::norm(vec![BigInt::from(1), BigInt::from(1)]));
        // sign normalization: 1/(-d + 1) == -1/(d - 1)
        let g = RatFunc::new(ZPoly::one(), ZPoly::norm(vec![BigInt::from(1), BigInt::from(-1)]));
        assert!(g.den.leading() > BigInt::zero());
        assert!(g.num.leading() < BigInt::zero());
        // content cancellation across num and den
        let h = RatFunc::new(
            ZPoly::norm(vec![BigInt::from(2), BigInt::from(2)]),
            ZPoly::norm(vec![BigInt::from(4)]),
        );
        assert_eq!(h, RatFunc::new(ZPoly::norm(vec![BigInt::from(1), BigInt::from(1)]), ZPoly::constant(BigInt::from(2))));
    }

    #[test]
    fn m_relation_holds() {
        // m * (d - 1) == l^-1 - l, the defining relation of the ring
        let m = m_value();
        let dm1 = RElem::delta_pow(1).sub(&RElem::one());
        let lhs = m.mul(&dm1);
        let rhs = RElem::l_pow(-1).sub(&RElem::l_pow(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mu_specialization() {
        let m = m_value();
        assert!(mu_specialize(&m).unwrap().is_zero());
        assert_eq!(mu_specialize(&RElem::l_pow(5)).unwrap(), LaurentDelta::one());
        assert_eq!(
            mu_specialize(&RElem::delta_pow(-3)).unwrap(),
            LaurentDelta::delta_pow(-3)
        );
        // m^2 also vanishes, and l*m, m*d^-1 etc.
        assert!(mu_specialize(&m.mul(&m)).unwrap().is_zero());
        assert!(mu_specialize(&m.mul(&RElem::l_pow(1))).unwrap().is_zero());
        // 1/(d-1) alone is not in the image
        let bad = RElem::from_ratfunc(RatFunc::monomial_over(1, 0, 1), 0);
        assert!(mu_specialize(&bad).is_err());
    }

    #[test]
    fn relem_arithmetic() {
        let m = m_value();
        let a = RElem::l_pow(1).add(&m.mul(&RElem::delta_pow(2)));
        let b = RElem::l_pow(-1).sub(&m);
        assert_eq!(a.mul(&b), b.mul(&a));
        let assoc1 = a.mul(&b).mul(&m);
        let assoc2 = a.mul(&b.mul(&m));
        assert_eq!(assoc1, assoc2);
        assert!(a.sub(&a).is_zero());
        // distributivity
        assert_eq!(a.mul(&b.add(&m)), a.mul(&b).add(&a.mul(&m)));
    }

    #[test]
    fn m_display_is_reduced() {
        let m = m_value();
        let s = m.to_string();
        assert!(s.contains("d - 1"), "unexpected display: {s}");
        assert_eq!(m, m.clone());
    }
}

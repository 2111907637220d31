//! Sparse multivariate polynomials with rational coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Exponent vector with trailing zeros trimmed, so that polynomials in
/// different numbers of variables compare and combine directly.
pub type Monomial = Vec<u16>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

pub fn monomial_degree(m: &[u16]) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// Graded lexicographic comparison of trimmed exponent vectors.
pub fn grlex(a: &[u16], b: &[u16]) -> Ordering {
    monomial_degree(a).cmp(&monomial_degree(b)).then_with(|| {
        let n = a.len().max(b.len());
        for i in 0..n {
            let (x, y) = (
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
            );
            if x != y {
                return x.cmp(&y);
            }
        }
        Ordering::Equal
    })
}

pub fn monomial_mul(a: &[u16], b: &[u16]) -> Monomial {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

/// `a / b` when `b` divides `a`.
pub fn monomial_div(a: &[u16], b: &[u16]) -> Option<Monomial> {
    if b.len() > a.len() && b[a.len()..].iter().any(|&e| e > 0) {
        return None;
    }
    let out = a
        .iter()
        .enumerate()
        .map(|(i, &e)| e.checked_sub(b.get(i).copied().unwrap_or(0)))
        .collect::<Option<Monomial>>()?;
    Some(trim(out))
}

/// Every monomial in `nvars` variables of total degree at most `d`, in grlex order.
pub fn monomials_up_to(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == cur.len() {
            out.push(trim(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out.sort_by(|a, b| grlex(a, b));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyQ {
    nvars: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PolyQ {
    pub fn zero_in(nvars: usize) -> Self {
        PolyQ {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = PolyQ::zero_in(nvars);
        p.add_term(Vec::new(), c);
        p
    }

    pub fn from_i64(nvars: usize, c: i64) -> Self {
        PolyQ::constant(nvars, BigRational::from_integer(c.into()))
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable {i} out of range for {nvars}");
        let mut m = vec![0; i + 1];
        m[i] = 1;
        PolyQ::monomial(nvars, m, BigRational::one())
    }

    pub fn monomial(nvars: usize, m: Monomial, c: BigRational) -> Self {
        let mut p = PolyQ::zero_in(nvars);
        p.add_term(m, c);
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; exponents may be shorter than `nvars`.
    pub fn from_terms(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut p = PolyQ::zero_in(nvars);
        for (m, c) in terms {
            assert!(m.len() <= nvars || m[nvars..].iter().all(|&e| e == 0));
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let m = trim(m);
        self.nvars = self.nvars.max(m.len());
        match self.terms.entry(m) {
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

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms with trimmed exponent vectors, in lexicographic key order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u16]) -> BigRational {
        self.terms
            .get(&trim(m.to_vec()))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| monomial_degree(m))
            .max()
            .unwrap_or(0)
    }

    /// Variables with nonzero exponent somewhere in the polynomial.
    pub fn support_vars(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.iter().enumerate() {
                used[i] |= e > 0;
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return PolyQ::zero_in(self.nvars);
        }
        PolyQ {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &[u16], c: &BigRational) -> Self {
        let mut out = PolyQ::zero_in(self.nvars.max(m.len()));
        for (k, v) in &self.terms {
            out.add_term(monomial_mul(k, m), v * c);
        }
        out
    }

    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (m, c)| {
            let term = m.iter().enumerate().fold(c.clone(), |t, (i, &e)| {
                t * num_traits::pow(point[i].clone(), e as usize)
            });
            acc + term
        })
    }

    /// Sets the listed variables to zero.
    pub fn kill_vars(&self, vars: &[usize]) -> Self {
        let mut out = PolyQ::zero_in(self.nvars);
        for (m, c) in &self.terms {
            if vars.iter().all(|&v| m.get(v).copied().unwrap_or(0) == 0) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Renames variable `i` to `map[i]`; variables mapped to `None` must not occur.
    pub fn rename_vars(&self, map: &[Option<usize>], nvars: usize) -> Self {
        let mut out = PolyQ::zero_in(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u16; nvars];
            for (i, &x) in m.iter().enumerate() {
                if x > 0 {
                    e[map[i].expect("renamed variable")] += x;
                }
            }
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.clone();
                    e.resize(self.nvars, 0);
                    (e, c.to_string())
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, String> {
        let mut p = PolyQ::zero_in(j.nvars);
        for (e, c) in &j.terms {
            if e.len() != j.nvars {
                return Err(format!(
                    "exponent vector of length {}, expected {}",
                    e.len(),
                    j.nvars
                ));
            }
            let c: BigRational = c.parse().map_err(|_| format!("bad coefficient {c:?}"))?;
            p.add_term(e.clone(), c);
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub nvars: usize,
    pub terms: Vec<(Vec<u16>, String)>,
}

impl Zero for PolyQ {
    fn zero() -> Self {
        PolyQ::zero_in(0)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for PolyQ {
    fn one() -> Self {
        PolyQ::from_i64(0, 1)
    }
}

impl Add for PolyQ {
    type Output = PolyQ;
    fn add(mut self, rhs: PolyQ) -> PolyQ {
        self.nvars = self.nvars.max(rhs.nvars);
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for PolyQ {
    type Output = PolyQ;
    fn neg(mut self) -> PolyQ {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for PolyQ {
    type Output = PolyQ;
    fn sub(self, rhs: PolyQ) -> PolyQ {
        self + (-rhs)
    }
}

impl Mul for PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: PolyQ) -> PolyQ {
        &self * &rhs
    }
}

impl Mul for &PolyQ {
    type Output = PolyQ;
    fn mul(self, rhs: &PolyQ) -> PolyQ {
        let mut out = PolyQ::zero_in(self.nvars.max(rhs.nvars));
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(monomial_mul(a, b), x * y);
            }
        }
        out
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| grlex(b, a));
        for (k, m) in keys.into_iter().enumerate() {
            let c = &self.terms[m];
            let neg = c < &BigRational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", fmt_coeff(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_coeff(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Shorthand for an integer as a rational.
pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

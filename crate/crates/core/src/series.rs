//! Sparse integer polynomials, characteristic series of semi-simple sets and
//! the recognizability test on their denominators.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::natvec::NatVec;
use crate::parikh::SemilinearSet;

/// Multivariate polynomial with integer coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<NatVec, BigInt>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(dim: usize) -> Self {
        Polynomial::monomial(NatVec::zero(dim), BigInt::one())
    }

    pub fn monomial(exp: NatVec, coeff: BigInt) -> Self {
        let mut p = Polynomial::zero(exp.dim());
        p.add_term(exp, coeff);
        p
    }

    /// `1 - x^β`.
    pub fn binomial(beta: &NatVec) -> Self {
        let mut p = Polynomial::one(beta.dim());
        p.add_term(beta.clone(), -BigInt::one());
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
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

    /// Terms in lexicographic order of exponents.
    pub fn terms(&self) -> impl Iterator<Item = (&NatVec, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &NatVec) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(NatVec::total).max()
    }

    pub fn add_term(&mut self, exp: NatVec, coeff: BigInt) {
        debug_assert_eq!(exp.dim(), self.dim);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.mul_truncated(other, None)
    }

    fn mul_truncated(&self, other: &Polynomial, cap: Option<u64>) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if cap.is_some_and(|d| e.total() > d) {
                    continue;
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Every coefficient equals 1.
    pub fn is_zero_one(&self) -> bool {
        self.terms.values().all(One::is_one)
    }

    /// Renders with variables `x, y, z` (or `x1, x2, …` beyond three letters).
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&NatVec> = self.terms.keys().collect();
        keys.sort_by(|a, b| display_order(a, b));
        let mut out = String::new();
        for (i, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono = monomial_text(e);
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono,
                (false, false) => format!("{mag}*{mono}"),
            };
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Total degree ascending, then exponent vector descending (so `x` precedes `y`).
fn display_order(a: &NatVec, b: &NatVec) -> Ordering {
    a.total().cmp(&b.total()).then_with(|| b.cmp(a))
}

/// Graded order used by division: total degree, then lexicographic.
fn graded(a: &NatVec, b: &NatVec) -> Ordering {
    a.total().cmp(&b.total()).then_with(|| a.cmp(b))
}

fn var_name(j: usize, k: usize) -> String {
    if k <= 3 {
        ["x", "y", "z"][j].to_string()
    } else {
        format!("x{}", j + 1)
    }
}

fn monomial_text(e: &NatVec) -> String {
    let k = e.dim();
    e.0.iter()
        .enumerate()
        .filter(|(_, &p)| p > 0)
        .map(|(j, &p)| {
            if p == 1 {
                var_name(j, k)
            } else {
                format!("{}^{p}", var_name(j, k))
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Product of binomials `(1 - x^β)`; the empty product is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactoredDenominator {
    factors: Vec<NatVec>,
}

impl FactoredDenominator {
    pub fn new(factors: impl IntoIterator<Item = NatVec>) -> Result<Self> {
        let mut factors: Vec<NatVec> = factors.into_iter().collect();
        if factors.iter().any(NatVec::is_zero) {
            return Err(Error::Precondition("denominator factor 1 - x^0".into()));
        }
        factors.sort();
        Ok(FactoredDenominator { factors })
    }

    pub fn one() -> Self {
        FactoredDenominator::default()
    }

    /// Factors in lexicographic order of `β`, repeated by multiplicity.
    pub fn factors(&self) -> &[NatVec] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn multiplicity(&self, beta: &NatVec) -> usize {
        self.factors.iter().filter(|b| *b == beta).count()
    }

    pub fn expand(&self, dim: usize) -> Polynomial {
        self.factors
            .iter()
            .fold(Polynomial::one(dim), |acc, b| acc.mul(&Polynomial::binomial(b)))
    }

    fn remove_one(&mut self, beta: &NatVec) {
        if let Some(i) = self.factors.iter().position(|b| b == beta) {
            self.factors.remove(i);
        }
    }

    pub fn pretty(&self) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        let mut fs: Vec<&NatVec> = self.factors.iter().collect();
        fs.sort_by(|a, b| display_order(a, b));
        let body = fs
            .iter()
            .map(|b| format!("(1 - {})", monomial_text(b)))
            .collect::<Vec<_>>()
            .join("*");
        if fs.len() == 1 {
            body
        } else {
            format!("({body})")
        }
    }
}

/// `numerator / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFraction {
    pub numerator: Polynomial,
    pub denominator: FactoredDenominator,
}

impl RationalFraction {
    pub fn dim(&self) -> usize {
        self.numerator.dim()
    }
}

impl fmt::Display for RationalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.numerator.pretty();
        if self.numerator.len() > 1 {
            write!(f, "({num})")?;
        } else {
            write!(f, "{num}")?;
        }
        write!(f, " / {}", self.denominator.pretty())
    }
}

/// Characteristic series of a free, consistent, unambiguous union of linear sets.
pub fn char_series(s: &SemilinearSet) -> Result<RationalFraction> {
    if !(s.all_free.is_yes() && s.consistent.is_yes() && s.unambiguous.is_yes()) {
        return Err(Error::Precondition(
            "characteristic series needs checked free, consistent and unambiguous flags".into(),
        ));
    }
    let mut common: BTreeMap<NatVec, usize> = BTreeMap::new();
    for t in &s.terms {
        let mut local: BTreeMap<&NatVec, usize> = BTreeMap::new();
        for b in &t.basis {
            *local.entry(b).or_default() += 1;
        }
        for (b, m) in local {
            let e = common.entry(b.clone()).or_default();
            *e = (*e).max(m);
        }
    }
    let mut numerator = Polynomial::zero(s.dim);
    for t in &s.terms {
        let mut term = Polynomial::monomial(t.offset.clone(), BigInt::one());
        for (b, &m) in &common {
            let have = t.basis.iter().filter(|x| *x == b).count();
            for _ in have..m {
                term = term.mul(&Polynomial::binomial(b));
            }
        }
        numerator = numerator.add(&term);
    }
    let denominator = FactoredDenominator::new(
        common
            .into_iter()
            .flat_map(|(b, m)| std::iter::repeat_n(b, m)),
    )?;
    Ok(RationalFraction {
        numerator,
        denominator,
    })
}

/// Quotient `q` with `num = (1 - x^β)·q`, or `None` when the division leaves a remainder.
pub fn poly_divide_exact(num: &Polynomial, beta: &NatVec) -> Option<Polynomial> {
    assert!(!beta.is_zero(), "division by 1 - x^0");
    let mut q = Polynomial::zero(num.dim());
    let Some(top) = num.degree() else {
        return Some(q);
    };
    let limit = top.checked_sub(beta.total())?;
    let mut r = num.clone();
    while let Some((m, c)) = r
        .terms
        .iter()
        .min_by(|a, b| graded(a.0, b.0))
        .map(|(m, c)| (m.clone(), c.clone()))
    {
        if m.total() > limit {
            return None;
        }
        q.add_term(m.clone(), c.clone());
        r.add_term(m.clone(), -c.clone());
        r.add_term(&m + beta, c);
    }
    Some(q)
}

/// Outcome of the recognizability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Reduced fraction whose denominator has only single-variable factors.
    Recognizable(RationalFraction),
    /// A multivariable factor `(1 - x^β)` that does not divide the numerator.
    NotRecognizable {
        witness: NatVec,
        remaining: RationalFraction,
    },
}

impl Verdict {
    pub fn is_recognizable(&self) -> bool {
        matches!(self, Verdict::Recognizable(_))
    }
}

/// Divides out every multivariable factor (per occurrence, lexicographic order),
/// then opportunistically whole single-variable factors.
pub fn simplify_and_decide(f: &RationalFraction) -> Verdict {
    let mut num = f.numerator.clone();
    let mut den = f.denominator.clone();
    let multi: Vec<NatVec> = f
        .denominator
        .factors()
        .iter()
        .filter(|b| b.support_size() >= 2)
        .cloned()
        .collect();
    for beta in multi {
        match poly_divide_exact(&num, &beta) {
            Some(q) => {
                num = q;
                den.remove_one(&beta);
            }
            None => {
                return Verdict::NotRecognizable {
                    witness: beta,
                    remaining: RationalFraction {
                        numerator: num,
                        denominator: den,
                    },
                }
            }
        }
    }
    let singles: Vec<NatVec> = den.factors().to_vec();
    for beta in singles {
        if let Some(q) = poly_divide_exact(&num, &beta) {
            num = q;
            den.remove_one(&beta);
        }
    }
    Verdict::Recognizable(RationalFraction {
        numerator: num,
        denominator: den,
    })
}

/// All coefficients of total degree at most `cap`.
pub fn expand_truncated(f: &RationalFraction, cap: u64) -> Polynomial {
    let dim = f.dim();
    let mut acc = Polynomial::zero(dim);
    for (e, c) in f.numerator.terms() {
        if e.total() <= cap {
            acc.add_term(e.clone(), c.clone());
        }
    }
    for beta in f.denominator.factors() {
        let mut geo = Polynomial::one(dim);
        let mut pow = beta.clone();
        while pow.total() <= cap {
            geo.add_term(pow.clone(), BigInt::one());
            pow = &pow + beta;
        }
        acc = acc.mul_truncated(&geo, Some(cap));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parikh::{Check, LinearSet};

    fn nv<const N: usize>(v: [u64; N]) -> NatVec {
        NatVec::from(v)
    }

    fn poly(terms: &[(&[u64], i64)]) -> Polynomial {
        let dim = terms.first().map_or(0, |t| t.0.len());
        let mut p = Polynomial::zero(dim);
        for (e, c) in terms {
            p.add_term(NatVec(e.to_vec()), BigInt::from(*c));
        }
        p
    }

    fn checked(dim: usize, terms: Vec<LinearSet>) -> SemilinearSet {
        let mut s = SemilinearSet::new(dim, terms);
        s.all_free = Check::Yes;
        s.consistent = Check::Yes;
        s.unambiguous = Check::Yes;
        s
    }

    #[test]
    fn diagonal_series() {
        let s = checked(2, vec![LinearSet::new(nv([1, 1]), [nv([1, 1])])]);
        let f = char_series(&s).unwrap();
        assert_eq!(f.to_string(), "x*y / (1 - x*y)");
        match simplify_and_decide(&f) {
            Verdict::NotRecognizable { witness, .. } => assert_eq!(witness, nv([1, 1])),
            v => panic!("unexpected {v:?}"),
        }
        let e = expand_truncated(&f, 6);
        assert_eq!(
            e.terms().map(|(k, _)| k.clone()).collect::<Vec<_>>(),
            vec![nv([1, 1]), nv([2, 2]), nv([3, 3])]
        );
    }

    #[test]
    fn even_series() {
        let s = checked(2, vec![LinearSet::new(nv([0, 1]), [nv([2, 0]), nv([0, 2])])]);
        let f = char_series(&s).unwrap();
        assert_eq!(f.to_string(), "y / ((1 - x^2)*(1 - y^2))");
        assert_eq!(simplify_and_decide(&f), Verdict::Recognizable(f));
    }

    #[test]
    fn singleton_series() {
        let s = checked(2, vec![LinearSet::point(nv([2, 3]))]);
        let f = char_series(&s).unwrap();
        assert_eq!(f.to_string(), "x^2*y^3 / 1");
        assert!(simplify_and_decide(&f).is_recognizable());
    }

    #[test]
    fn unchecked_flags_rejected() {
        let s = SemilinearSet::new(1, vec![LinearSet::point(nv([1]))]);
        assert!(char_series(&s).is_err());
    }

    #[test]
    fn example_s_reduces() {
        let p = poly(&[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], -1)]);
        let num = Polynomial::binomial(&nv([1, 1])).mul(&p);
        let f = RationalFraction {
            numerator: num,
            denominator: FactoredDenominator::new([nv([1, 1]), nv([1, 0]), nv([0, 1])]).unwrap(),
        };
        match simplify_and_decide(&f) {
            Verdict::Recognizable(r) => {
                assert_eq!(r.numerator, p);
                assert_eq!(r.to_string(), "(x + y - x*y) / ((1 - x)*(1 - y))");
                let e = expand_truncated(&r, 5);
                for i in 0..=5u64 {
                    for j in 0..=5 - i {
                        let want = i64::from((i, j) != (0, 0));
                        assert_eq!(e.coeff(&NatVec(vec![i, j])), BigInt::from(want));
                    }
                }
            }
            v => panic!("unexpected {v:?}"),
        }
    }

    #[test]
    fn division_examples() {
        let p = poly(&[(&[0, 0], 1), (&[2, 2], -1)]);
        assert_eq!(
            poly_divide_exact(&p, &nv([1, 1])),
            Some(poly(&[(&[0, 0], 1), (&[1, 1], 1)]))
        );
        let p = poly(&[(&[1, 0], 1), (&[0, 1], 1), (&[1, 1], -1)]);
        assert_eq!(poly_divide_exact(&p, &nv([1, 1])), None);
        assert_eq!(
            poly_divide_exact(&Polynomial::zero(2), &nv([3, 1])),
            Some(Polynomial::zero(2))
        );
    }

    #[test]
    fn truncation_of_polynomial_fraction() {
        let p = poly(&[(&[1, 0], 3), (&[0, 2], -2)]);
        let f = RationalFraction {
            numerator: p.clone(),
            denominator: FactoredDenominator::one(),
        };
        assert_eq!(expand_truncated(&f, 10), p);
        assert_eq!(p.to_string(), "3*x - 2*y^2");
    }

    #[test]
    fn many_variables_are_numbered() {
        let p = Polynomial::monomial(NatVec(vec![1, 0, 0, 2]), BigInt::one());
        assert_eq!(p.to_string(), "x1*x4^2");
    }
}

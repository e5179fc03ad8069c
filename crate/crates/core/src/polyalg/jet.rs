use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A polynomial in `nvars` variables known modulo monomials of degree `> order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Jet {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Jet {
    pub fn zero(nvars: usize, order: u32) -> Self {
        assert!(order >= 1, "jet order must be at least 1");
        Jet {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: Scalar) -> Self {
        Jet::monomial(nvars, order, Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, order: u32, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range");
        Jet::monomial(nvars, order, Monomial::var(nvars, i), Scalar::one())
    }

    pub fn monomial(nvars: usize, order: u32, m: Monomial, c: Scalar) -> Self {
        let mut j = Jet::zero(nvars, order);
        j.add_term(m, c);
        j
    }

    /// Sums the given terms; monomials above `order` are dropped.
    pub fn from_terms(
        nvars: usize,
        order: u32,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        let mut j = Jet::zero(nvars, order);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: m.nvars(),
                });
            }
            j.add_term(m, c);
        }
        Ok(j)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Adds `c * m` in place, ignoring monomials above the truncation order.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() || m.degree() > self.order {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.lowest_degree().map_or(true, |d| d > 0)
    }

    pub fn homogeneous_part(&self, d: u32) -> Jet {
        self.filter(|m| m.degree() == d)
    }

    /// Part of degree in `lo..=hi`.
    pub fn degree_range(&self, lo: u32, hi: u32) -> Jet {
        self.filter(|m| (lo..=hi).contains(&m.degree()))
    }

    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Jet {
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same polynomial with a different truncation order (dropping terms if lowered).
    pub fn with_order(&self, order: u32) -> Jet {
        assert!(order >= 1, "jet order must be at least 1");
        Jet {
            nvars: self.nvars,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Jet {
        if s.is_zero() {
            return Jet::zero(self.nvars, self.order);
        }
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &Jet, s: &Scalar) {
        self.check_compatible(other);
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn derivative(&self, i: usize) -> Jet {
        let mut out = Jet::zero(self.nvars, self.order);
        for (m, c) in &self.terms {
            if let Some(q) = m.div_var(i) {
                let e = m.exp(i);
                out.terms.insert(q, c * Scalar::from_integer(e.into()));
            }
        }
        out
    }

    pub fn gradient(&self) -> Vec<Jet> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    pub fn pow(&self, k: u32) -> Jet {
        let mut acc = Jet::constant(self.nvars, self.order, Scalar::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`.
    ///
    /// The images may live in a different number of variables; the result has
    /// their variable count and order.
    pub fn compose(&self, images: &[Jet]) -> Jet {
        Substitution::new(images).apply(self)
    }

    /// Exact evaluation at a rational point (the truncated polynomial itself).
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Canonical text, e.g. `x - 1/2*y^2`; `0` for the zero jet.
    pub fn to_text(&self, names: &[impl AsRef<str>]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let a = c.abs();
            let unit = m.degree() == 0;
            if unit {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                m.write_with(names, &mut s).expect("writing to a String");
            }
        }
        s
    }

    fn check_compatible(&self, other: &Jet) {
        assert_eq!(self.nvars, other.nvars, "jets in different variable counts");
        assert_eq!(self.order, other.order, "jets with different truncation orders");
    }
}

/// Default variable names `x1, x2, ...`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Jet[{}; N={}]({})",
            self.nvars,
            self.order,
            self.to_text(&default_names(self.nvars))
        )
    }
}

impl<'a> Add<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn add(self, rhs: &'a Jet) -> Jet {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl<'a> Sub<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn sub(self, rhs: &'a Jet) -> Jet {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(&-Scalar::one())
    }
}

impl<'a> Mul<&'a Jet> for &'a Jet {
    type Output = Jet;
    fn mul(self, rhs: &'a Jet) -> Jet {
        self.check_compatible(rhs);
        let n = self.order;
        let mut out = Jet::zero(self.nvars, n);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > n {
                break;
            }
            for (mb, cb) in &rhs.terms {
                // terms are graded, so every later term is too heavy as well
                if da + mb.degree() > n {
                    break;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $f(self, rhs: Jet) -> Jet {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A substitution `x_i -> images[i]` with a cache of image powers.
///
/// Composing several jets through one `Substitution` shares the powers
/// `images^alpha` between them.
pub struct Substitution<'a> {
    images: &'a [Jet],
    nvars: usize,
    order: u32,
    cache: HashMap<Monomial, Jet>,
}

impl<'a> Substitution<'a> {
    pub fn new(images: &'a [Jet]) -> Self {
        let first = images.first().expect("substitution needs at least one image");
        let (nvars, order) = (first.nvars, first.order);
        for im in images {
            im.check_compatible(first);
        }
        Substitution {
            images,
            nvars,
            order,
            cache: HashMap::new(),
        }
    }

    fn power(&mut self, m: &Monomial) -> Jet {
        if let Some(j) = self.cache.get(m) {
            return j.clone();
        }
        let result = match (0..m.nvars()).rev().find(|&i| m.exp(i) > 0) {
            None => Jet::constant(self.nvars, self.order, Scalar::one()),
            Some(i) => {
                let lower = m.div_var(i).unwrap();
                let p = self.power(&lower);
                &p * &self.images[i]
            }
        };
        self.cache.insert(m.clone(), result.clone());
        result
    }

    pub fn apply(&mut self, f: &Jet) -> Jet {
        assert_eq!(f.nvars, self.images.len(), "substitution arity mismatch");
        let mut out = Jet::zero(self.nvars, self.order);
        for (m, c) in &f.terms {
            let p = self.power(m);
            out.add_scaled(&p, c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn xyz(n: u32) -> (Jet, Jet, Jet) {
        (Jet::var(3, n, 0), Jet::var(3, n, 1), Jet::var(3, n, 2))
    }

    #[test]
    fn truncated_product() {
        let (x, y, _) = xyz(3);
        let p = &(&x + &y).pow(2) * &(&x + &y);
        assert_eq!(p.max_degree(), Some(3));
        let q = &p * &x;
        assert!(q.is_zero());
        assert_eq!(p.coeff(&Monomial::new(&[2, 1, 0])), int(3));
    }

    #[test]
    fn text_form() {
        let (x, y, z) = xyz(4);
        let f = &(&x - &y.pow(2).scale(&frac(1, 2))) - &z.scale(&int(3));
        assert_eq!(f.to_text(&["x", "y", "z"]), "x - 3*z - 1/2*y^2");
        assert_eq!((-&z).to_text(&["x", "y", "z"]), "-z");
        assert_eq!(Jet::constant(3, 2, int(-2)).to_text(&["x", "y", "z"]), "-2");
    }

    #[test]
    fn compose_and_derivative() {
        let (x, y, _) = xyz(4);
        let f = &x * &y;
        let g = f.compose(&[&x + &x.pow(2), y.clone(), Jet::var(3, 4, 2)]);
        assert_eq!(g, &(&x * &y) + &(&x.pow(2) * &y));
        assert_eq!(g.derivative(0), &y + &(&x * &y).scale(&int(2)));
    }

    #[test]
    fn evaluation() {
        let (x, y, z) = xyz(3);
        let f = &(&x * &y) - &z;
        assert_eq!(f.eval(&[int(2), frac(1, 2), int(5)]), int(-4));
    }
}

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// Exponent vector of a monomial in a fixed number of variables.
///
/// Ordered graded-lexicographically: lower total degree first, and within one
/// degree the lexicographically larger exponent vector first, so that in three
/// variables the degree-2 monomials come out as `x^2, x*y, x*z, y^2, y*z, z^2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 8]>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[i] = 1;
        m
    }

    pub fn new(exps: &[u16]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    /// Degree counted only over the variables selected by `mask`.
    pub fn partial_degree(&self, mask: &[bool]) -> u32 {
        self.exps
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(&e, _)| e as u32)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self / x_i`, if `x_i` divides `self`.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut m = self.clone();
        m.exps[i] -= 1;
        Some(m)
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut m = self.clone();
        m.exps[i] += 1;
        m
    }

    /// All monomials of exactly degree `d` in `nvars` variables, ascending.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; nvars];
        fn rec(out: &mut Vec<Monomial>, cur: &mut Vec<u16>, pos: usize, left: u32) {
            let n = cur.len();
            if n == 0 {
                if left == 0 {
                    out.push(Monomial::new(cur));
                }
                return;
            }
            if pos == n - 1 {
                cur[pos] = left as u16;
                out.push(Monomial::new(cur));
                cur[pos] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e as u16;
                rec(out, cur, pos + 1, left - e);
            }
            cur[pos] = 0;
        }
        rec(&mut out, &mut cur, 0, d);
        out
    }

    /// Writes `x^2*y` style text using the given variable names; `1` for the unit.
    pub fn write_with(&self, names: &[impl AsRef<str>], f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            f.write_str(names[i].as_ref())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

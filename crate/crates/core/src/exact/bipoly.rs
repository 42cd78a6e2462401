use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use super::{Coefficient, Polynomial};

/// Sparse bivariate polynomial keyed by `(deg_first, deg_second)`.
///
/// Variables are positional; callers name them (`x, y` for weight
/// enumerators, `u, v` for Tutte polynomials). Zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivariate<T> {
    terms: BTreeMap<(u32, u32), T>,
}

impl<T: Coefficient> Bivariate<T> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: T, a: u32, b: u32) -> Self {
        let mut out = Self::zero();
        out.add_term(a, b, c);
        out
    }

    /// `p(first)` as a bivariate polynomial not involving the second variable.
    pub fn from_first(p: &Polynomial<T>) -> Self {
        let mut out = Self::zero();
        for (d, c) in p.coeffs().iter().enumerate() {
            out.add_term(d as u32, 0, c.clone());
        }
        out
    }

    pub fn from_second(p: &Polynomial<T>) -> Self {
        let mut out = Self::zero();
        for (d, c) in p.coeffs().iter().enumerate() {
            out.add_term(0, d as u32, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: T) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let sum = match self.terms.remove(&key) {
            Some(prev) => prev + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn coeff(&self, a: u32, b: u32) -> T {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &T)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (a, b, v) in self.terms() {
            out.add_term(a, b, v.clone() * c.clone());
        }
        out
    }

    pub fn eval(&self, first: &T, second: &T) -> T {
        let mut acc = T::zero();
        for (a, b, c) in self.terms() {
            acc = acc + c.clone() * pow(first, a) * pow(second, b);
        }
        acc
    }
}

fn pow<T: Coefficient>(base: &T, exp: u32) -> T {
    (0..exp).fold(T::one(), |acc, _| acc * base.clone())
}

impl<T: Coefficient> Default for Bivariate<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Coefficient> Add for &Bivariate<T> {
    type Output = Bivariate<T>;
    fn add(self, rhs: Self) -> Bivariate<T> {
        let mut out = self.clone();
        for (a, b, c) in rhs.terms() {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl<T: Coefficient> Sub for &Bivariate<T> {
    type Output = Bivariate<T>;
    fn sub(self, rhs: Self) -> Bivariate<T> {
        let mut out = self.clone();
        for (a, b, c) in rhs.terms() {
            out.add_term(a, b, -c.clone());
        }
        out
    }
}

impl<T: Coefficient> Mul for &Bivariate<T> {
    type Output = Bivariate<T>;
    fn mul(self, rhs: Self) -> Bivariate<T> {
        let mut out = Bivariate::zero();
        for (a1, b1, c1) in self.terms() {
            for (a2, b2, c2) in rhs.terms() {
                out.add_term(a1 + a2, b1 + b2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Coefficient + fmt::Display> Bivariate<T> {
    /// Rendering with the given variable names, highest first-degree first.
    pub fn display_with(&self, first: &str, second: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (a, b, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let text = c.to_string();
            let (negative, magnitude) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if magnitude != "1" || (a == 0 && b == 0) {
                factors.push(magnitude);
            }
            for (var, d) in [(first, a), (second, b)] {
                match d {
                    0 => {}
                    1 => factors.push(var.to_string()),
                    _ => factors.push(format!("{var}^{d}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

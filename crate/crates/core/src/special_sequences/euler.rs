use std::collections::HashMap;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Generalised Euler polynomials `E_{q,n}(x)` of a fixed order `q ≥ 2`,
/// defined by `q e^{xt} / (1 + e^t + … + e^{(q−1)t}) = Σ E_{q,n}(x) t^n/n!`.
///
/// The sequence is Appell, so the table only stores the constants
/// `e_n = E_{q,n}(0)`; the coefficient of `x^i` in `E_{q,n}` is `C(n,i) e_{n−i}`.
/// Clearing `e^{qt} − 1` from the generating function at `x = 0` gives
/// `Σ_{j≤n} C(n+1,j) q^{n+1−j} e_j = q`.
/// The denominator of `e_n` divides `q^n`, so the solve runs on the integers
/// `N_n = q^n e_n`: `(n+1) N_n = q^n − Σ_{j<n} C(n+1,j) q^{2(n−j)} N_j`.
/// Windows `Σ_{i<q} E_{q,n}(x+i) = q x^n` are spot-checked as the table grows.
#[derive(Clone, Debug)]
pub struct EulerPolyTable {
    order: u64,
    /// `q^n e_n`
    numerators: Vec<Integer>,
    constants: Vec<Rational>,
    /// `Σ_{i=0}^{q−1} i^m`
    window_sums: Vec<Integer>,
    /// `q^n`
    order_powers: Vec<Integer>,
    /// `q^n E_{q,n}(x)` keyed by `(n, x)`
    memo: HashMap<(usize, u64), Integer>,
}

impl EulerPolyTable {
    pub fn new(order: u64) -> Result<Self> {
        if order < 2 {
            return Err(Error::Domain(format!(
                "generalised Euler polynomials need q >= 2 (got {order})"
            )));
        }
        Ok(EulerPolyTable {
            order,
            numerators: vec![Integer::from(1)],
            constants: vec![Rational::from(1)],
            window_sums: vec![Integer::from(order)],
            order_powers: vec![Integer::from(1)],
            memo: HashMap::new(),
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.constants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty()
    }

    fn grow_aux(&mut self, m: usize) {
        while self.window_sums.len() <= m {
            let e = self.window_sums.len() as u32;
            let s: Integer = (0..self.order).map(|i| Integer::from(i).pow(e)).sum();
            self.window_sums.push(s);
        }
        while self.order_powers.len() <= m {
            let next = Integer::from(self.order_powers.last().expect("nonempty") * self.order);
            self.order_powers.push(next);
        }
    }

    pub fn extend_to(&mut self, n: usize) {
        let q2 = self.order * self.order;
        while self.constants.len() <= n {
            let next = self.constants.len();
            self.grow_aux(next);
            // Horner in q² over j < next, binomials C(next+1, j) ascending
            let mut acc = Integer::new();
            let mut c = Integer::from(1);
            for j in 0..next {
                acc *= q2;
                acc += Integer::from(&c * &self.numerators[j]);
                c *= (next + 1 - j) as u64;
                c.div_exact_u_mut(j as u32 + 1);
            }
            acc *= q2;
            let mut numer = &self.order_powers[next] - acc ;
            numer.div_exact_u_mut(next as u32 + 1);
            self.constants
                .push(Rational::from((numer.clone(), self.order_powers[next].clone())));
            self.numerators.push(numer);
            if next < 32 || next.is_power_of_two() {
                self.spot_check(next);
            }
        }
    }

    fn spot_check(&self, n: usize) {
        // Windows at x = 0, 1, 2 share all but two evaluations.
        let q = self.order as usize;
        let values: Vec<Rational> = (0..q + 2)
            .map(|x| self.eval_stored(n, &Rational::from(x as u64)))
            .collect();
        for x in 0..3usize {
            let window: Rational = values[x..x + q].iter().sum();
            let expected = Rational::from(self.order) * Rational::from(x as u64).pow(n as i32);
            let expected = if n == 0 { Rational::from(self.order) } else { expected };
            assert_eq!(
                window, expected,
                "window identity fails for E_{{{q},{n}}} at x = {x}"
            );
        }
    }

    /// `C(n,i)·q^{n−i} e_{n−i}`, `i = 0..=n`.
    fn scaled_row(&self, n: usize) -> Vec<Integer> {
        let mut c = Integer::from(1);
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..=n {
            out.push(Integer::from(&self.numerators[n - i] * &c));
            c *= (n - i) as u64;
            c.div_exact_u_mut(i as u32 + 1);
        }
        out
    }

    fn eval_row(&self, row: &[Integer], x: &Rational) -> Rational {
        // with x = a/b: q^n b^n E_{q,n}(x) = Σ_i row_i (q a)^i b^{n−i}, by Horner
        let n = row.len() - 1;
        let (a, b) = (x.numer(), x.denom());
        let qa = Integer::from(a * self.order);
        let mut acc = Integer::new();
        let mut b_pow = Integer::from(1);
        for r in row.iter().rev() {
            acc *= &qa;
            if *b == 1 {
                acc += r;
            } else {
                acc += Integer::from(r * &b_pow);
                b_pow *= b;
            }
        }
        let den = &self.order_powers[n] * Integer::from(b.pow(n as u32)) ;
        Rational::from((acc, den))
    }

    fn eval_stored(&self, n: usize, x: &Rational) -> Rational {
        self.eval_row(&self.scaled_row(n), x)
    }

    /// `E_{q,n}(0)`.
    pub fn constant(&mut self, n: usize) -> &Rational {
        self.extend_to(n);
        &self.constants[n]
    }

    /// Coefficients of `E_{q,n}(x)`, lowest degree first.
    pub fn row(&mut self, n: usize) -> Vec<Rational> {
        self.extend_to(n);
        let mut c = Integer::from(1);
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..=n {
            out.push(Rational::from(&self.constants[n - i] * &c));
            c *= (n - i) as u64;
            c.div_exact_u_mut(i as u32 + 1);
        }
        out
    }

    pub fn value(&mut self, n: usize, x: &Rational) -> Rational {
        self.extend_to(n);
        self.eval_stored(n, x)
    }

    /// `q^n E_{q,n}(x)` at integer points, sharing the coefficient row; results are memoised.
    pub fn scaled_values(&mut self, n: usize, xs: &[u64]) -> Vec<Integer> {
        let missing: Vec<u64> = xs.iter().copied().filter(|&x| !self.memo.contains_key(&(n, x))).collect();
        if !missing.is_empty() {
            self.extend_to(n);
            let row = self.scaled_row(n);
            for x in missing {
                let qx = x * self.order;
                let mut acc = Integer::new();
                for r in row.iter().rev() {
                    acc *= qx;
                    acc += r;
                }
                self.memo.insert((n, x), acc);
            }
        }
        xs.iter().map(|&x| self.memo[&(n, x)].clone()).collect()
    }
}

/// `E_{q,n}(x)` from a fresh table.
pub fn euler_poly_value(q: u64, n: usize, x: &Rational) -> Result<Rational> {
    Ok(EulerPolyTable::new(q)?.value(n, x))
}

/// Whether `Σ_{i=0}^{q−1} E_{q,n}(x+i) = q x^n` holds exactly.
pub fn euler_poly_window_check(table: &mut EulerPolyTable, n: usize, x: &Rational) -> bool {
    let q = table.order();
    let lhs: Rational = (0..q)
        .map(|i| table.value(n, &(x + Rational::from(i))))
        .sum();
    let rhs = Rational::from(q) * if n == 0 { Rational::from(1) } else { x.clone().pow(n as i32) };
    lhs == rhs
}

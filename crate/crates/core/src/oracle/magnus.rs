//! Truncated Magnus expansion `xᵢ ↦ 1 + Xᵢ` into noncommutative power series.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::OracleError;
use crate::words::{Alphabet, Sign, Word};

/// A noncommutative monomial `X_{v₁}⋯X_{v_k}`, ordered by degree and then
/// lexicographically by variable index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A series truncated above `degree_bound`, over ℤ or ℤ/p. Zero
/// coefficients are never stored; mod-p coefficients lie in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    rank: usize,
    degree_bound: usize,
    modulus: Option<u64>,
    terms: BTreeMap<Monomial, BigInt>,
}

impl TruncatedSeries {
    pub fn one(rank: usize, degree_bound: usize, modulus: Option<u64>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one(), BigInt::one());
        TruncatedSeries {
            rank,
            degree_bound,
            modulus,
            terms,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    /// Smallest positive degree carrying a nonzero coefficient.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).find(|&d| d > 0)
    }

    fn reduce(&self, c: BigInt) -> BigInt {
        match self.modulus {
            Some(p) => {
                let p = BigInt::from(p);
                ((c % &p) + &p) % &p
            }
            None => c,
        }
    }

    /// Truncated product. Both factors must share rank, bound and modulus.
    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, OracleError> {
        if self.rank != other.rank
            || self.degree_bound != other.degree_bound
            || self.modulus != other.modulus
        {
            return Err(OracleError::IncompatibleSeries);
        }
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > self.degree_bound {
                    continue;
                }
                let mut m = ma.0.clone();
                m.extend_from_slice(&mb.0);
                *acc.entry(Monomial(m)).or_default() += ca * cb;
            }
        }
        let terms = acc
            .into_iter()
            .map(|(m, c)| (m, self.reduce(c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(TruncatedSeries {
            terms,
            ..self.clone()
        })
    }

    /// Renders the series with variables named after `alphabet`, e.g.
    /// `1 + X(x1) X(x2) - X(x2) X(x1)`.
    pub fn format_with(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .map(|&v| format!("X({})", alphabet.name(v as usize)))
                .collect();
            if vars.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&vars.join(" "));
            } else {
                out.push_str(&format!("{} {}", abs, vars.join(" ")));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Alphabet::new((1..=self.rank).map(|i| format!("x{i}"))).expect("valid names");
        f.write_str(&self.format_with(&names))
    }
}

/// Per-degree sparse accumulator keyed by the base-`rank` code of a monomial.
struct Accumulator {
    rank: u128,
    modulus: Option<BigInt>,
    by_degree: Vec<HashMap<u128, BigInt>>,
}

impl Accumulator {
    fn add(&mut self, degree: usize, code: u128, c: &BigInt, negate: bool) {
        let entry = self.by_degree[degree].entry(code).or_default();
        if negate {
            *entry -= c;
        } else {
            *entry += c;
        }
        if let Some(p) = &self.modulus {
            *entry = ((&*entry % p) + p) % p;
        }
        if entry.is_zero() {
            self.by_degree[degree].remove(&code);
        }
    }

    /// Right multiplication by `1 + X_v`.
    fn times_generator(&mut self, v: u128) {
        let d = self.by_degree.len() - 1;
        for j in (0..d).rev() {
            let src: Vec<(u128, BigInt)> = self.by_degree[j]
                .iter()
                .map(|(k, c)| (*k, c.clone()))
                .collect();
            for (code, c) in src {
                self.add(j + 1, code * self.rank + v, &c, false);
            }
        }
    }

    /// Right multiplication by `(1 + X_v)⁻¹`: the result `T` satisfies
    /// `T_j = S_j − T_{j−1}·X_v`, filled in increasing degree.
    fn times_inverse_generator(&mut self, v: u128) {
        let d = self.by_degree.len() - 1;
        for j in 1..=d {
            let src: Vec<(u128, BigInt)> = self.by_degree[j - 1]
                .iter()
                .map(|(k, c)| (*k, c.clone()))
                .collect();
            for (code, c) in src {
                self.add(j, code * self.rank + v, &c, true);
            }
        }
    }
}

/// Magnus image of `w` truncated at degree `d`, over ℤ or over ℤ/p.
///
/// Panics if `rank^d` does not fit in 128 bits.
pub fn magnus_expand(w: &Word, d: usize, p: Option<u64>) -> TruncatedSeries {
    let rank = w.alphabet().len();
    assert!(
        (rank.max(2) as u128).checked_pow(d as u32).is_some(),
        "monomial codes overflow for rank {rank} and degree {d}"
    );
    let mut acc = Accumulator {
        rank: rank as u128,
        modulus: p.map(BigInt::from),
        by_degree: vec![HashMap::new(); d + 1],
    };
    acc.by_degree[0].insert(0, BigInt::one());
    for l in w.letters() {
        match l.sign {
            Sign::Pos => acc.times_generator(l.gen as u128),
            Sign::Neg => acc.times_inverse_generator(l.gen as u128),
        }
    }
    let mut terms = BTreeMap::new();
    for (deg, map) in acc.by_degree.into_iter().enumerate() {
        for (code, c) in map {
            terms.insert(decode(code, deg, rank), c);
        }
    }
    TruncatedSeries {
        rank,
        degree_bound: d,
        modulus: p,
        terms,
    }
}

fn decode(mut code: u128, degree: usize, rank: usize) -> Monomial {
    let mut vars = vec![0u16; degree];
    for slot in vars.iter_mut().rev() {
        *slot = (code % rank as u128) as u16;
        code /= rank as u128;
    }
    Monomial(vars)
}

/// Position of a word in the lower central series, read off its Magnus image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcsDegree {
    /// `w ∈ γ_k(F) ∖ γ_{k+1}(F)`.
    Exactly(usize),
    /// All degrees `1..=d` vanish, so `w ∈ γ_{d+1}(F)`.
    Exceeds(usize),
}

impl LcsDegree {
    /// Whether `w ∈ γ_k(F)` is established.
    pub fn at_least(self, k: usize) -> bool {
        match self {
            LcsDegree::Exactly(j) => j >= k,
            LcsDegree::Exceeds(d) => d + 1 >= k,
        }
    }
}

impl fmt::Display for LcsDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LcsDegree::Exactly(k) => write!(f, "{k}"),
            LcsDegree::Exceeds(d) => write!(f, "exceeds {d}"),
        }
    }
}

/// Smallest `k ≤ d` with a nonzero integral Magnus coefficient in degree
/// `k`. For free groups this is exactly the lower central series position.
pub fn lcs_degree(w: &Word, d: usize) -> LcsDegree {
    match magnus_expand(w, d, None).lowest_degree() {
        Some(k) => LcsDegree::Exactly(k),
        None => LcsDegree::Exceeds(d),
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn ab() -> Arc<Alphabet> {
        Alphabet::numbered("x", 2)
    }

    fn parse(s: &str) -> Word {
        Word::parse(s, &ab()).unwrap()
    }

    fn m(v: &[u16]) -> Monomial {
        Monomial(v.to_vec())
    }

    #[test]
    fn generator_and_inverse() {
        let s = magnus_expand(&parse("x1"), 2, None);
        assert_eq!(s.format_with(&ab()), "1 + X(x1)");
        let s = magnus_expand(&parse("x1^-1"), 2, None);
        assert_eq!(s.format_with(&ab()), "1 - X(x1) + X(x1) X(x1)");
    }

    #[test]
    fn commutator_degree_two() {
        let s = magnus_expand(&parse("[x1,x2]"), 2, None);
        assert_eq!(s.coefficient(&m(&[0, 1])), BigInt::from(1));
        assert_eq!(s.coefficient(&m(&[1, 0])), BigInt::from(-1));
        assert_eq!(s.terms().count(), 3);
        assert_eq!(s.format_with(&ab()), "1 + X(x1) X(x2) - X(x2) X(x1)");
    }

    #[test]
    fn mod_p_reduces_coefficients() {
        let s = magnus_expand(&parse("x1^-1"), 3, Some(2));
        // 1 - X + X² - X³ ≡ 1 + X + X² + X³ (mod 2).
        assert_eq!(s.terms().count(), 4);
        assert!(s.terms().all(|(_, c)| c.is_one()));
        assert!(magnus_expand(&parse("x1^4"), 3, Some(2)).is_one());
    }

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_degree(&parse("x1"), 3), LcsDegree::Exactly(1));
        assert_eq!(lcs_degree(&parse("[x1,x2,x1]"), 5), LcsDegree::Exactly(3));
        assert_eq!(
            lcs_degree(&parse("[[x1,x2],[x1,x2]]"), 4),
            LcsDegree::Exceeds(4)
        );
        assert!(LcsDegree::Exceeds(4).at_least(5));
        assert!(!LcsDegree::Exactly(3).at_least(4));
    }

    #[test]
    fn monomial_order_is_graded() {
        assert!(m(&[1]) < m(&[0, 0]));
        assert!(m(&[0, 1]) < m(&[1, 0]));
        assert!(Monomial::one() < m(&[0]));
    }

    #[test]
    fn incompatible_products_are_rejected() {
        let a = magnus_expand(&parse("x1"), 2, None);
        let b = magnus_expand(&parse("x1"), 3, None);
        assert_eq!(a.mul(&b), Err(OracleError::IncompatibleSeries));
    }
}

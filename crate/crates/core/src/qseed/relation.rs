use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::qlaurent::power_symbol as power;

/// `A_k A'_k = q^m ([∏ A_j^{plus_j}] + q^{d_k} [∏ A_j^{minus_j}])`, exponents doubled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExchangeRelation {
    pub index: usize,
    pub prefactor2: i64,
    pub plus: Vec<i64>,
    pub gap2: i64,
    pub minus: Vec<i64>,
}

/// How variables are printed in relation logs.
#[derive(Debug, Clone, Copy)]
pub enum Naming<'a> {
    /// `e1, e2, …` by position in the current cluster.
    Positional,
    /// The seed's display names, which record earlier mutations with primes.
    Labels(&'a [String]),
}

impl Naming<'_> {
    fn name(&self, i: usize) -> String {
        match self {
            Naming::Positional => format!("e{}", i + 1),
            Naming::Labels(names) => names[i].clone(),
        }
    }
}

/// One summand `v^{power2/2}[monomial]` of a relation's right-hand side.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Term {
    pub power2: i64,
    pub mono: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRelationError {
    #[error("cannot read {0:?} as a v-power")]
    Power(String),
    #[error("cannot read {0:?} as a variable")]
    Variable(String),
    #[error("variable e{index} outside 1..={n}")]
    OutOfRange { index: usize, n: usize },
    #[error("summand {0:?} has no [..] monomial")]
    MissingBracket(String),
}

fn parse_power(s: &str) -> Result<i64, ParseRelationError> {
    let bad = || ParseRelationError::Power(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Ok(0);
    }
    let rest = s.strip_prefix(['v', 'q']).ok_or_else(bad)?;
    if rest.is_empty() {
        return Ok(2);
    }
    let exp = rest.strip_prefix('^').ok_or_else(bad)?;
    let exp = exp.trim_start_matches('{').trim_end_matches('}');
    match exp.split_once('/') {
        Some((num, "2")) => num.parse().map_err(|_| bad()),
        Some(_) => Err(bad()),
        None => exp.parse::<i64>().map(|e| 2 * e).map_err(|_| bad()),
    }
}

fn parse_monomial(s: &str, n: usize) -> Result<Vec<i64>, ParseRelationError> {
    let mut mono = vec![0; n];
    for tok in s.split_whitespace().filter(|t| *t != "1") {
        let bad = || ParseRelationError::Variable(tok.to_string());
        let (var, exp) = tok.split_once('^').unwrap_or((tok, "1"));
        let idx: usize = var
            .strip_prefix('e')
            .map(|v| v.trim_matches('\''))
            .and_then(|v| v.parse().ok())
            .ok_or_else(bad)?;
        if idx == 0 || idx > n {
            return Err(ParseRelationError::OutOfRange { index: idx, n });
        }
        mono[idx - 1] += exp.parse::<i64>().map_err(|_| bad())?;
    }
    Ok(mono)
}

/// Reads a right-hand side such as `v^{1/2}[e2 e6] + v^{-1/2}[e1 e4 e11]`
/// over `n` positional variables.
pub fn parse_rhs(s: &str, n: usize) -> Result<Vec<Term>, ParseRelationError> {
    s.split('+')
        .map(|part| {
            let part = part.trim();
            let open = part
                .find('[')
                .ok_or_else(|| ParseRelationError::MissingBracket(part.to_string()))?;
            let close = part
                .rfind(']')
                .filter(|&c| c > open)
                .ok_or_else(|| ParseRelationError::MissingBracket(part.to_string()))?;
            Ok(Term {
                power2: parse_power(&part[..open])?,
                mono: parse_monomial(&part[open + 1..close], n)?,
            })
        })
        .collect()
}

fn sorted(terms: &[Term]) -> Vec<Term> {
    let mut v = terms.to_vec();
    v.sort();
    v
}

impl ExchangeRelation {
    /// Doubled q-exponent on the `[b_jk]_+` monomial.
    pub fn plus_power2(&self) -> i64 {
        self.prefactor2
    }

    /// Doubled q-exponent on the `[-b_jk]_+` monomial.
    pub fn minus_power2(&self) -> i64 {
        self.prefactor2 + self.gap2
    }

    pub fn terms(&self) -> [Term; 2] {
        [
            Term {
                power2: self.plus_power2(),
                mono: self.plus.clone(),
            },
            Term {
                power2: self.minus_power2(),
                mono: self.minus.clone(),
            },
        ]
    }

    /// Equality of right-hand sides as sums of bracketed monomials.
    pub fn same_terms(&self, other: &[Term]) -> bool {
        sorted(&self.terms()) == sorted(other)
    }

    /// Equality of the monomials alone, ignoring the v-powers.
    pub fn same_monomials(&self, other: &[Term]) -> bool {
        let mut a: Vec<_> = self.terms().into_iter().map(|t| t.mono).collect();
        let mut b: Vec<_> = other.iter().map(|t| t.mono.clone()).collect();
        a.sort();
        b.sort();
        a == b
    }

    pub fn bracket(mono: &[i64], naming: Naming<'_>) -> String {
        let mut parts = Vec::new();
        for (j, &e) in mono.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(naming.name(j)),
                _ => parts.push(format!("{}^{e}", naming.name(j))),
            }
        }
        if parts.is_empty() {
            "[1]".to_string()
        } else {
            format!("[{}]", parts.join(" "))
        }
    }

    pub fn lhs(&self, naming: Naming<'_>) -> String {
        let a = naming.name(self.index);
        format!("{a} {a}'")
    }

    /// `e1 e1' = q^{-1/2}([e2 e3] + q [e4 e5 e7])`.
    pub fn factored(&self, naming: Naming<'_>) -> String {
        let inner = {
            let gap = power("q", self.gap2);
            let sep = if gap.is_empty() { "" } else { " " };
            format!(
                "{} + {gap}{sep}{}",
                Self::bracket(&self.plus, naming),
                Self::bracket(&self.minus, naming)
            )
        };
        let pre = power("q", self.prefactor2);
        if pre.is_empty() {
            format!("{} = {inner}", self.lhs(naming))
        } else {
            format!("{} = {pre}({inner})", self.lhs(naming))
        }
    }

    /// `e4 e4' = v^{-1}[e1^2 e2] + v[e6 e7^2 e9^2 e12]`.
    pub fn expanded(&self, naming: Naming<'_>, var: &str) -> String {
        let mut s = self.lhs(naming);
        s.push_str(" = ");
        let _ = write!(
            s,
            "{}{} + {}{}",
            power(var, self.plus_power2()),
            Self::bracket(&self.plus, naming),
            power(var, self.minus_power2()),
            Self::bracket(&self.minus, naming)
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let r = ExchangeRelation {
            index: 0,
            prefactor2: -1,
            plus: vec![0, 1, 1, 0, 0, 0, 0, 0],
            gap2: 2,
            minus: vec![0, 0, 0, 1, 1, 0, 1, 0],
        };
        assert_eq!(
            r.factored(Naming::Positional),
            "e1 e1' = q^{-1/2}([e2 e3] + q [e4 e5 e7])"
        );
        assert_eq!(
            r.expanded(Naming::Positional, "v"),
            "e1 e1' = v^{-1/2}[e2 e3] + v^{1/2}[e4 e5 e7]"
        );
    }

    #[test]
    fn parse_round_trip() {
        let terms = parse_rhs("v^{1/2}[e2 e6] + v^{-1/2}[e1 e4 e11]", 14).unwrap();
        assert_eq!(terms[0].power2, 1);
        assert_eq!(terms[1].power2, -1);
        assert_eq!(terms[1].mono[10], 1);
        let t = parse_rhs("[e'4 e8] + v^2[e'3^2]", 14).unwrap();
        assert_eq!((t[1].power2, t[1].mono[2]), (4, 2));
        assert_eq!(parse_rhs("v[1]", 3).unwrap()[0].mono, vec![0, 0, 0]);
        assert!(matches!(
            parse_rhs("[e15]", 14),
            Err(ParseRelationError::OutOfRange { .. })
        ));
        assert!(matches!(
            parse_rhs("v^{1/3}[e1]", 14),
            Err(ParseRelationError::Power(_))
        ));
    }

    #[test]
    fn term_comparison_ignores_order() {
        let r = ExchangeRelation {
            index: 2,
            prefactor2: 0,
            plus: vec![1, 0, 0, 0, 1],
            gap2: 2,
            minus: vec![0, 1, 0, 0, 0],
        };
        assert!(r.same_terms(&parse_rhs("v[e2] + [e1 e5]", 5).unwrap()));
        assert!(!r.same_terms(&parse_rhs("[e2] + v[e1 e5]", 5).unwrap()));
        assert!(r.same_monomials(&parse_rhs("[e2] + v[e1 e5]", 5).unwrap()));
    }
}

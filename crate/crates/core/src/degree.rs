//! Degrees in the monoid ℕᵏ and gradings in ℤᵏ.

use std::fmt;
use std::ops::Add;

/// An element of ℕᵏ.
///
/// The derived `Ord` is lexicographic and only exists so degrees can key
/// ordered maps. The coordinatewise partial order is [`Degree::le`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(entries: Vec<u32>) -> Self {
        Degree(entries)
    }

    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    /// The canonical generator `e_i` (0-based color `i`).
    pub fn unit(rank: usize, color: usize) -> Self {
        let mut v = vec![0; rank];
        v[color] = 1;
        Degree(v)
    }

    /// `(j, j, …, j)`.
    pub fn diagonal(rank: usize, j: u32) -> Self {
        Degree(vec![j; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, color: usize) -> u32 {
        self.0[color]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Every coordinate strictly positive.
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&x| x > 0)
    }

    /// Coordinatewise `self ≤ other`.
    pub fn le(&self, other: &Degree) -> bool {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `self − other`, or `None` unless `other ≤ self`.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }

    pub fn scale(&self, factor: u32) -> Degree {
        Degree(self.0.iter().map(|x| x * factor).collect())
    }

    /// The difference `self − other` as a grading in ℤᵏ.
    pub fn grade_minus(&self, other: &Degree) -> Grade {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| i64::from(*a) - i64::from(*b))
            .collect()
    }

    pub fn to_grade(&self) -> Grade {
        self.0.iter().map(|&a| i64::from(a)).collect()
    }

    /// All degrees `d` with `0 ≤ d ≤ self`, in lexicographic order.
    pub fn box_below(&self) -> Vec<Degree> {
        let mut out = vec![Vec::with_capacity(self.rank())];
        for &bound in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=bound).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Degree).collect()
    }

    /// Parses `"m,n,…"`.
    pub fn parse(text: &str) -> Option<Degree> {
        text.split(',')
            .map(|t| t.trim().parse::<u32>().ok())
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }
}

impl Add for &Degree {
    type Output = Degree;

    fn add(self, rhs: &Degree) -> Degree {
        debug_assert_eq!(self.rank(), rhs.rank());
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        &self + &rhs
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A grading index in ℤᵏ, e.g. `d(λ) − d(μ)`.
pub type Grade = Vec<i64>;

pub fn grade_is_zero(g: &[i64]) -> bool {
    g.iter().all(|&x| x == 0)
}

pub fn format_grade(g: &[i64]) -> String {
    let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Splits `p ∈ ℤᵏ` as `p⁺ − p⁻` with `p⁺, p⁻ ∈ ℕᵏ` of disjoint support.
pub fn split_grade(p: &[i64]) -> (Degree, Degree) {
    let plus = p.iter().map(|&x| x.max(0) as u32).collect();
    let minus = p.iter().map(|&x| (-x).max(0) as u32).collect();
    (Degree(plus), Degree(minus))
}

//! Hanner polytopes: symmetric intervals closed under direct products and
//! free sums.
//!
//! Trees are written with `·` (or `I`) for the interval `[-1, 1]`, and
//! `(A × B)` / `(A ⊕ B)` for products and free sums. ASCII `x`, `*` and `+`
//! are accepted as well.

use std::fmt;
use std::str::FromStr;

use super::{direct_product, free_sum, ConvexBody};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HannerTree {
    Leaf,
    Product(Box<HannerTree>, Box<HannerTree>),
    FreeSum(Box<HannerTree>, Box<HannerTree>),
}

impl HannerTree {
    pub fn product(a: HannerTree, b: HannerTree) -> Self {
        Self::Product(Box::new(a), Box::new(b))
    }

    pub fn free_sum(a: HannerTree, b: HannerTree) -> Self {
        Self::FreeSum(Box::new(a), Box::new(b))
    }

    pub fn leaves(&self) -> usize {
        match self {
            Self::Leaf => 1,
            Self::Product(a, b) | Self::FreeSum(a, b) => a.leaves() + b.leaves(),
        }
    }

    /// Every labelled binary tree with `n` leaves.
    pub fn enumerate(n: usize) -> Vec<HannerTree> {
        if n == 0 {
            return Vec::new();
        }
        if n == 1 {
            return vec![Self::Leaf];
        }
        let mut out = Vec::new();
        for left in 1..n {
            let ls = Self::enumerate(left);
            let rs = Self::enumerate(n - left);
            for l in &ls {
                for r in &rs {
                    out.push(Self::product(l.clone(), r.clone()));
                    out.push(Self::free_sum(l.clone(), r.clone()));
                }
            }
        }
        out
    }

    pub fn build(&self) -> Result<ConvexBody> {
        match self {
            Self::Leaf => ConvexBody::cube(1, 1.0),
            Self::Product(a, b) => direct_product(&a.build()?, &b.build()?),
            Self::FreeSum(a, b) => free_sum(&a.build()?, &b.build()?),
        }
    }
}

impl fmt::Display for HannerTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Leaf => write!(f, "·"),
            Self::Product(a, b) => write!(f, "({a} × {b})"),
            Self::FreeSum(a, b) => write!(f, "({a} ⊕ {b})"),
        }
    }
}

impl FromStr for HannerTree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::InvalidInput("empty Hanner tree".into()));
        }
        let mut pos = 0;
        let tree = parse(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::InvalidInput(format!("trailing input at position {pos} of Hanner tree")));
        }
        Ok(tree)
    }
}

fn parse(c: &[char], pos: &mut usize) -> Result<HannerTree> {
    let bad = |pos: usize, what: &str| Error::InvalidInput(format!("Hanner tree: expected {what} at position {pos}"));
    match c.get(*pos) {
        Some('·') | Some('I') | Some('.') => {
            *pos += 1;
            Ok(HannerTree::Leaf)
        }
        Some('(') => {
            *pos += 1;
            let a = parse(c, pos)?;
            let op = *c.get(*pos).ok_or_else(|| bad(*pos, "operator"))?;
            *pos += 1;
            let b = parse(c, pos)?;
            if c.get(*pos) != Some(&')') {
                return Err(bad(*pos, "')'"));
            }
            *pos += 1;
            match op {
                '×' | 'x' | '*' => Ok(HannerTree::product(a, b)),
                '⊕' | '+' => Ok(HannerTree::free_sum(a, b)),
                _ => Err(bad(*pos - 1, "'×' or '⊕'")),
            }
        }
        _ => Err(bad(*pos, "leaf or '('")),
    }
}

/// Builds the Hanner polytope of a tree.
pub fn hanner(tree: &HannerTree) -> Result<ConvexBody> {
    tree.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let t: HannerTree = "((· × ·) ⊕ I)".parse().unwrap();
        assert_eq!(t.leaves(), 3);
        assert_eq!(t.to_string(), "((· × ·) ⊕ ·)");
        assert_eq!("(. x .)".parse::<HannerTree>().unwrap(), HannerTree::product(HannerTree::Leaf, HannerTree::Leaf));
        assert!("".parse::<HannerTree>().is_err());
        assert!("(· ×".parse::<HannerTree>().is_err());
        assert!("(· - ·)".parse::<HannerTree>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        // Catalan(n-1) * 2^(n-1)
        assert_eq!(HannerTree::enumerate(1).len(), 1);
        assert_eq!(HannerTree::enumerate(2).len(), 2);
        assert_eq!(HannerTree::enumerate(3).len(), 8);
        assert_eq!(HannerTree::enumerate(4).len(), 40);
    }

    #[test]
    fn leaf_and_square() {
        let leaf = hanner(&HannerTree::Leaf).unwrap();
        assert_eq!(leaf.dim(), 1);
        let sq = hanner(&"(· × ·)".parse().unwrap()).unwrap();
        assert_eq!(sq.vertices().unwrap().len(), 4);
        assert!(sq.is_symmetric());
    }
}

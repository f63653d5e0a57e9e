use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{smith_reduce, IntMatrix};
use crate::error::{Error, Result};

/// Isomorphism class of a finitely generated abelian group:
/// `Z/d_1 ⊕ ... ⊕ Z/d_k ⊕ Z^r` with `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[BigInt::from(n)], 0)
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupStructure {
            invariant_factors: Vec::new(),
            free_rank: rank,
        }
    }

    /// Validates an already canonical factor list.
    pub fn from_invariant_factors(factors: Vec<BigInt>, free_rank: usize) -> Result<Self> {
        for (i, d) in factors.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::Internal(format!("invariant factor {d} < 2")));
            }
            if i + 1 < factors.len() && !factors[i + 1].is_multiple_of(d) {
                return Err(Error::Internal(format!(
                    "invariant factors {} and {} do not divide",
                    d,
                    factors[i + 1]
                )));
            }
        }
        Ok(AbelianGroupStructure {
            invariant_factors: factors,
            free_rank,
        })
    }

    /// Canonical form of `⊕ Z/n_i ⊕ Z^free` for arbitrary cyclic orders `n_i`
    /// (an order of 0 contributes a free summand, 1 is dropped).
    pub fn from_cyclic_orders(orders: &[BigInt], free_rank: usize) -> Self {
        let mut extra_free = 0;
        let nonzero: Vec<BigInt> = orders
            .iter()
            .filter(|n| {
                if n.is_zero() {
                    extra_free += 1;
                    false
                } else {
                    true
                }
            })
            .map(|n| n.abs())
            .collect();
        let k = nonzero.len();
        let red = smith_reduce(&IntMatrix::diagonal(k, k, &nonzero), false);
        let factors = red
            .diagonal
            .into_iter()
            .filter(|d| !d.is_one())
            .collect::<Vec<_>>();
        AbelianGroupStructure {
            invariant_factors: factors,
            free_rank: free_rank + extra_free,
        }
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut orders = self.invariant_factors.clone();
        orders.extend(other.invariant_factors.iter().cloned());
        Self::from_cyclic_orders(&orders, self.free_rank + other.free_rank)
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

pub(crate) fn bigint_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(x.to_string()),
    }
}

impl Serialize for AbelianGroupStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let factors: Vec<serde_json::Value> =
            self.invariant_factors.iter().map(bigint_json).collect();
        let mut s = serializer.serialize_struct("AbelianGroupStructure", 2)?;
        s.serialize_field("invariant_factors", &factors)?;
        s.serialize_field("free_rank", &self.free_rank)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_merges_coprime_factors() {
        let g = AbelianGroupStructure::from_cyclic_orders(
            &[BigInt::from(2), BigInt::from(3), BigInt::from(1)],
            0,
        );
        assert_eq!(g, AbelianGroupStructure::cyclic(6));
        let h = AbelianGroupStructure::from_cyclic_orders(&[BigInt::from(4), BigInt::from(2)], 1);
        assert_eq!(h.invariant_factors(), &[BigInt::from(2), BigInt::from(4)]);
        assert_eq!(h.to_string(), "Z/2 + Z/4 + Z");
    }

    #[test]
    fn rejects_broken_chain() {
        assert!(AbelianGroupStructure::from_invariant_factors(
            vec![BigInt::from(2), BigInt::from(3)],
            0
        )
        .is_err());
    }
}

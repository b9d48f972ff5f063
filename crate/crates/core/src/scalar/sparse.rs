use std::collections::btree_map::{self, BTreeMap};
use std::ops::{Bound, RangeBounds};

use num_bigint::BigInt;
use num_traits::Num;
use serde::{Deserialize, Serialize};

use super::{Dyadic, ScalarError};

/// A finitely supported sequence with dyadic coefficients.
///
/// Zero coefficients are never stored: writing a zero removes the entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: BTreeMap<usize, Dyadic>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    /// The basis vector `e_i`.
    pub fn unit(i: usize) -> Self {
        let mut v = SparseVec::new();
        v.set(i, Dyadic::one());
        v
    }

    pub fn from_entries<I: IntoIterator<Item = (usize, Dyadic)>>(entries: I) -> Self {
        let mut v = SparseVec::new();
        for (i, c) in entries {
            v.add_term(i, &c);
        }
        v
    }

    pub fn get(&self, i: usize) -> Dyadic {
        self.entries.get(&i).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, c: Dyadic) {
        if c.is_zero() {
            self.entries.remove(&i);
        } else {
            self.entries.insert(i, c);
        }
    }

    /// `self[i] += c`.
    pub fn add_term(&mut self, i: usize, c: &Dyadic) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(i) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            btree_map::Entry::Occupied(mut slot) => {
                let sum = slot.get() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, scale: &Dyadic, other: &SparseVec) {
        if scale.is_zero() {
            return;
        }
        for (i, c) in other.iter() {
            self.add_term(i, &(scale * c));
        }
    }

    pub fn scaled(&self, scale: &Dyadic) -> SparseVec {
        if scale.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self.entries.iter().map(|(&i, c)| (i, scale * c)).collect(),
        }
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(&Dyadic::one(), other);
        out
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut out = self.clone();
        out.add_scaled(&Dyadic::from_int(-1), other);
        out
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, &Dyadic)> + '_ {
        self.entries.iter().map(|(&i, c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn min_index(&self) -> Option<usize> {
        self.entries.keys().next().copied()
    }

    /// Coordinate restriction to an index range.
    pub fn restrict<R: RangeBounds<usize>>(&self, range: R) -> SparseVec {
        let lo = match range.start_bound() {
            Bound::Included(&a) => Bound::Included(a),
            Bound::Excluded(&a) => Bound::Excluded(a),
            Bound::Unbounded => Bound::Unbounded,
        };
        let hi = match range.end_bound() {
            Bound::Included(&a) => Bound::Included(a),
            Bound::Excluded(&a) => Bound::Excluded(a),
            Bound::Unbounded => Bound::Unbounded,
        };
        SparseVec {
            entries: self
                .entries
                .range((lo, hi))
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        }
    }

    /// Dense copy over `[0, len)`; panics if the support reaches `len`.
    pub fn to_dense(&self, len: usize) -> Vec<Dyadic> {
        let mut out = vec![Dyadic::zero(); len];
        for (i, c) in self.iter() {
            out[i] = c.clone();
        }
        out
    }

    pub fn from_dense(values: &[Dyadic]) -> SparseVec {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    fn doc(&self) -> VectorDoc {
        VectorDoc {
            entries: self
                .iter()
                .map(|(i, c)| EntryDoc {
                    i: i as u64,
                    m: format!("{:x}", c.mantissa()),
                    e: c.exponent(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.doc()).expect("vector serialization cannot fail")
    }

    /// Parses the `{"entries":[{"i":..,"m":"<hex>","e":..}]}` format. Entries
    /// must be sorted by index, unique, and nonzero; mantissas may be
    /// non-canonical and are normalized.
    pub fn from_json(text: &str) -> Result<SparseVec, ScalarError> {
        let doc: VectorDoc =
            serde_json::from_str(text).map_err(|e| ScalarError::VectorFormat(e.to_string()))?;
        let mut out = SparseVec::new();
        let mut last: Option<u64> = None;
        for entry in doc.entries {
            if let Some(prev) = last {
                if entry.i <= prev {
                    return Err(ScalarError::VectorFormat(format!(
                        "entries not strictly increasing at index {}",
                        entry.i
                    )));
                }
            }
            last = Some(entry.i);
            let m = parse_signed_hex(&entry.m)?;
            let c = Dyadic::new(m, entry.e);
            if c.is_zero() {
                return Err(ScalarError::VectorFormat(format!(
                    "zero mantissa at index {}",
                    entry.i
                )));
            }
            let i = usize::try_from(entry.i)
                .map_err(|_| ScalarError::VectorFormat(format!("index {} too large", entry.i)))?;
            out.set(i, c);
        }
        Ok(out)
    }
}

/// Same shape as [`SparseVec::to_json`].
impl Serialize for SparseVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.doc().serialize(s)
    }
}

fn parse_signed_hex(s: &str) -> Result<BigInt, ScalarError> {
    let bad = || ScalarError::VectorFormat(format!("bad hex mantissa {s:?}"));
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let body = body
        .strip_prefix("0x")
        .or_else(|| body.strip_prefix("0X"))
        .unwrap_or(body);
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(bad());
    }
    let m = BigInt::from_str_radix(body, 16).map_err(|_| bad())?;
    Ok(if negative { -m } else { m })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorDoc {
    entries: Vec<EntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDoc {
    i: u64,
    m: String,
    e: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_insert_deletes() {
        let mut v = SparseVec::unit(3);
        v.set(3, Dyadic::zero());
        assert!(v.is_zero());
        let mut w = SparseVec::unit(2);
        w.add_term(2, &Dyadic::from_int(-1));
        assert_eq!(w.support_len(), 0);
    }

    #[test]
    fn json_format_is_exact() {
        let v = SparseVec::from_entries([
            (0, Dyadic::new(-255, 2)),
            (7, Dyadic::new(1, -3)),
        ]);
        let text = v.to_json();
        assert_eq!(
            text,
            r#"{"entries":[{"i":0,"m":"-ff","e":2},{"i":7,"m":"1","e":-3}]}"#
        );
        assert_eq!(SparseVec::from_json(&text).unwrap(), v);
    }

    #[test]
    fn json_accepts_prefix_and_normalizes() {
        let v = SparseVec::from_json(r#"{"entries":[{"i":4,"m":"0x6","e":0}]}"#).unwrap();
        assert_eq!(v.get(4), Dyadic::new(3, 1));
    }

    #[test]
    fn json_rejects_bad_input() {
        for text in [
            r#"{"entries":[{"i":4,"m":"1","e":0},{"i":4,"m":"1","e":0}]}"#,
            r#"{"entries":[{"i":4,"m":"1","e":0},{"i":2,"m":"1","e":0}]}"#,
            r#"{"entries":[{"i":4,"m":"0","e":0}]}"#,
            r#"{"entries":[{"i":4,"m":"zz","e":0}]}"#,
            r#"{"entries":[{"i":-1,"m":"1","e":0}]}"#,
            r#"{"items":[]}"#,
        ] {
            assert!(SparseVec::from_json(text).is_err(), "{text}");
        }
    }

    #[test]
    fn restrict_partitions() {
        let v = SparseVec::from_entries([(0, Dyadic::one()), (4, Dyadic::from_int(3)), (9, Dyadic::pow2(-1))]);
        let lo = v.restrict(0..4);
        let hi = v.restrict(4..);
        assert_eq!(lo.add(&hi), v);
        assert_eq!(v.restrict(4..5), SparseVec::from_entries([(4, Dyadic::from_int(3))]));
    }
}

//! A concrete splitting class: singleton antichains of finite sequences over
//! the natural numbers, ordered by prefix domination.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{OracleError, SplittingStructure};

/// A finite sequence of natural numbers.
pub type Seq = Vec<u32>;

/// Renders digits concatenated when every entry is below 10 (`"01"`), the
/// bracket form otherwise (`"[10,2]"`), and `ε` for the empty sequence.
pub fn seq_label(s: &[u32]) -> String {
    if s.is_empty() {
        "ε".to_owned()
    } else if s.iter().all(|&d| d < 10) {
        s.iter().filter_map(|&d| char::from_digit(d, 10)).collect()
    } else {
        let parts: Vec<String> = s.iter().map(u32::to_string).collect();
        format!("[{}]", parts.join(","))
    }
}

fn is_prefix(a: &[u32], b: &[u32]) -> bool {
    a.len() <= b.len() && b[..a.len()] == *a
}

/// A finite non-empty set of sequences, none a prefix of another.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Antichain(Vec<Seq>);

impl Antichain {
    /// Drops duplicates and every member that is a proper prefix of another.
    ///
    /// # Panics
    /// If `strings` is empty.
    pub fn new(strings: impl IntoIterator<Item = Seq>) -> Self {
        let all: BTreeSet<Seq> = strings.into_iter().collect();
        assert!(!all.is_empty(), "antichains are non-empty");
        let kept = all
            .iter()
            .filter(|s| !all.iter().any(|t| t.len() > s.len() && is_prefix(s, t)))
            .cloned()
            .collect();
        Antichain(kept)
    }

    pub fn singleton(s: Seq) -> Self {
        Antichain(vec![s])
    }

    /// Builds an antichain from digit strings (`"ε"` or `""` is the empty
    /// sequence); convenient for small examples.
    pub fn from_digits(strings: &[&str]) -> Self {
        Antichain::new(
            strings
                .iter()
                .map(|s| s.chars().filter_map(|c| c.to_digit(10)).collect()),
        )
    }

    pub fn strings(&self) -> &[Seq] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The single member, if this is a class element.
    pub fn as_singleton(&self) -> Option<&Seq> {
        match self.0.as_slice() {
            [s] => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| seq_label(s)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All sequences with `len + sum == w`, in lexicographic order.
fn of_weight(w: u32) -> Vec<Seq> {
    if w == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for d in 0..w {
        for rest in of_weight(w - 1 - d) {
            let mut s = Vec::with_capacity(rest.len() + 1);
            s.push(d);
            s.extend(rest);
            out.push(s);
        }
    }
    out
}

#[derive(Debug, Default)]
struct Enumeration {
    base: Vec<Seq>,
    next_weight: u32,
    out: Vec<Seq>,
}

/// Ambient elements are antichains; the class is the singletons. `g ≤ h` iff
/// every member of `g` is a prefix of some member of `h`, and joins are
/// reduced unions.
///
/// The class is enumerated by weight (length plus sum of entries), then
/// lexicographically, optionally shuffled within consecutive windows.
#[derive(Debug)]
pub struct SyntheticAntichainModel {
    shuffle: Option<(u64, usize)>,
    cache: RefCell<Enumeration>,
}

impl Default for SyntheticAntichainModel {
    fn default() -> Self {
        Self::new()
    }
}

impl SyntheticAntichainModel {
    pub const DEFAULT_WINDOW: usize = 8;

    pub fn new() -> Self {
        SyntheticAntichainModel {
            shuffle: None,
            cache: RefCell::default(),
        }
    }

    /// Enumeration shuffled within consecutive blocks of `window` elements.
    pub fn shuffled(seed: u64, window: usize) -> Self {
        SyntheticAntichainModel {
            shuffle: Some((seed, window.max(1))),
            cache: RefCell::default(),
        }
    }

    /// The natural witness for "some `h > f` avoids every `g ∈ B`": extend
    /// `f` by the least entry not used as the next entry of a `g` above `f`.
    pub fn cond_ii(&self, f: &Antichain, b: &[Antichain]) -> Result<Antichain, OracleError> {
        let [c] = self.free_digits::<1>(f, b)?;
        Ok(self.extend(f, c))
    }

    fn free_digits<const K: usize>(
        &self,
        f: &Antichain,
        b: &[Antichain],
    ) -> Result<[u32; K], OracleError> {
        let s = f
            .as_singleton()
            .ok_or_else(|| OracleError::new(f, b, "f is not a class element"))?;
        let used: BTreeSet<u32> = b
            .iter()
            .flat_map(|g| g.strings())
            .filter(|t| t.len() > s.len() && is_prefix(s, t))
            .map(|t| t[s.len()])
            .collect();
        let mut free = (0..).filter(|d| !used.contains(d));
        Ok(std::array::from_fn(|_| free.next().expect("unbounded")))
    }

    fn extend(&self, f: &Antichain, c: u32) -> Antichain {
        let mut s = f.0[0].clone();
        s.push(c);
        Antichain::singleton(s)
    }
}

impl SplittingStructure for SyntheticAntichainModel {
    type Elem = Antichain;

    fn enumerate(&self, i: usize) -> Antichain {
        let mut e = self.cache.borrow_mut();
        while e.out.len() <= i {
            let (block, want) = match self.shuffle {
                Some((_, w)) => (e.out.len() / w, e.out.len() + w),
                None => (0, i + 1),
            };
            while e.base.len() < want {
                let w = e.next_weight;
                e.base.extend(of_weight(w));
                e.next_weight += 1;
            }
            let start = e.out.len();
            let mut chunk = e.base[start..want].to_vec();
            if let Some((seed, _)) = self.shuffle {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(block as u64);
                chunk.shuffle(&mut rng);
            }
            e.out.extend(chunk);
        }
        Antichain::singleton(e.out[i].clone())
    }

    fn bottom(&self) -> Antichain {
        Antichain::singleton(Vec::new())
    }

    fn leq(&self, a: &Antichain, b: &Antichain) -> bool {
        a.0.iter().all(|s| b.0.iter().any(|t| is_prefix(s, t)))
    }

    fn join(&self, a: &Antichain, b: &Antichain) -> Antichain {
        Antichain::new(a.0.iter().chain(&b.0).cloned())
    }

    fn in_class(&self, a: &Antichain) -> bool {
        a.len() == 1
    }

    /// Extends `f` by the two least entries not used as the next entry of any
    /// `g ∈ B` above `f`; this coincides with applying [`Self::cond_ii`] twice.
    fn split(&self, f: &Antichain, b: &[Antichain]) -> Result<(Antichain, Antichain), OracleError> {
        let [c0, c1] = self.free_digits::<2>(f, b)?;
        Ok((self.extend(f, c0), self.extend(f, c1)))
    }
}

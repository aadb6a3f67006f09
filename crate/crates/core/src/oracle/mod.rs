//! Exact small-L oracle: the loop transfer matrix on link patterns of a
//! half-infinite cylinder, with per-chord seam parity distinguishing
//! contractible from winding loops, plus a numeric six-vertex check.

mod linalg;
mod sixvertex;
mod transfer;

pub use linalg::{left_null_vector, NullVector};
pub use sixvertex::{sixvertex_check, transfer_matrix_6v, SixVertexReport, SixVertexWeights};
pub use transfer::{
    double_row_matrix, oracle_densities, row_step, staggered_step, FugacityEntry, Geometry,
    TransferMatrix, MAX_ORACLE_L,
};

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest circumference accepted by [`enumerate_states`].
pub const MAX_ENUMERATION_L: usize = 12;

/// What a generator or a transfer step closed off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopClosed {
    None,
    Contractible,
    NonContractible,
}

/// Planar pairing of L boundary points with the number of seam crossings
/// (mod 2) of each chord. The seam sits between points L−1 and 0.
///
/// Stored point-wise: `partner[i]` is the other end of the chord at `i` and
/// `parity[i] == parity[partner[i]]`. This layout is already canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkState {
    partner: Vec<u8>,
    parity: Vec<u8>,
}

#[derive(Serialize)]
struct ChordView {
    a: usize,
    b: usize,
    parity: u8,
}

impl Serialize for LinkState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let chords: Vec<ChordView> = self.chords().into_iter().map(|(a, b, parity)| ChordView { a, b, parity }).collect();
        chords.serialize(s)
    }
}

impl LinkState {
    /// Builds a state from chords `(a, b, parity)`, validating that they
    /// cover every point once and are non-crossing on the annulus.
    pub fn from_chords(l: usize, chords: &[(usize, usize, u8)]) -> Result<Self> {
        if l == 0 || l % 2 == 1 {
            return Err(Error::InvalidArgument(format!("L = {l} must be even and positive")));
        }
        let mut partner = vec![u8::MAX; l];
        let mut parity = vec![0u8; l];
        for &(a, b, p) in chords {
            if a >= l || b >= l || a == b || partner[a] != u8::MAX || partner[b] != u8::MAX || p > 1 {
                return Err(Error::InvalidArgument(format!("bad chord ({a}, {b}, {p})")));
            }
            partner[a] = b as u8;
            partner[b] = a as u8;
            parity[a] = p;
            parity[b] = p;
        }
        if partner.contains(&u8::MAX) {
            return Err(Error::InvalidArgument("chords do not cover every point".into()));
        }
        let s = LinkState { partner, parity };
        if !s.is_planar() {
            return Err(Error::InvalidArgument("chords cross".into()));
        }
        Ok(s)
    }

    /// Chords {2k, 2k+1} without seam crossings.
    pub fn adjacent(l: usize) -> Self {
        let partner = (0..l).map(|i| (i ^ 1) as u8).collect();
        LinkState { partner, parity: vec![0; l] }
    }

    /// Chords {k, L−1−k} without seam crossings.
    pub fn nested(l: usize) -> Self {
        let partner = (0..l).map(|i| (l - 1 - i) as u8).collect();
        LinkState { partner, parity: vec![0; l] }
    }

    pub(crate) fn from_raw(partner: Vec<u8>, parity: Vec<u8>) -> Self {
        LinkState { partner, parity }
    }

    pub fn len(&self) -> usize {
        self.partner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partner.is_empty()
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.parity[i]
    }

    /// Chords as `(smaller endpoint, larger endpoint, parity)`, sorted.
    pub fn chords(&self) -> Vec<(usize, usize, u8)> {
        (0..self.len())
            .filter(|&i| i < self.partner(i))
            .map(|i| (i, self.partner(i), self.parity[i]))
            .collect()
    }

    /// Whether point `x` lies on the side of chord `(a, b, p)`, a < b, that
    /// is cut off from the far end of the cylinder: inside (a, b) for p = 0,
    /// outside [a, b] for p = 1.
    fn enclosed(a: usize, b: usize, p: u8, x: usize) -> bool {
        let inside = a < x && x < b;
        if p == 0 {
            inside
        } else {
            !inside && x != a && x != b
        }
    }

    /// Chords pairwise nested or disjoint on the annulus.
    pub fn is_planar(&self) -> bool {
        let l = self.len();
        let involution = (0..l).all(|i| self.partner(i) != i && self.partner(self.partner(i)) == i);
        if !involution || (0..l).any(|i| self.parity[i] != self.parity[self.partner(i)]) {
            return false;
        }
        let chords = self.chords();
        for &(a1, b1, p1) in &chords {
            for &(a2, b2, p2) in &chords {
                if (a1, b1) == (a2, b2) {
                    continue;
                }
                let ends_in = [a2, b2].iter().filter(|&&x| Self::enclosed(a1, b1, p1, x)).count();
                match ends_in {
                    1 => return false,
                    2 => {
                        let nested = (0..l)
                            .filter(|&x| Self::enclosed(a2, b2, p2, x))
                            .all(|x| Self::enclosed(a1, b1, p1, x));
                        if !nested {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }
}

/// Temperley–Lieb generator joining points i and i+1 (mod L), drawn as a
/// cap below the current boundary and a cup above it. Only the wrap
/// generator i = L−1 crosses the seam, so only its cap and cup carry
/// parity 1.
pub fn apply_generator(s: &LinkState, i: usize) -> (LinkState, LoopClosed) {
    let l = s.len();
    let j = (i + 1) % l;
    let cap = u8::from(i == l - 1);
    let mut partner = s.partner.clone();
    let mut parity = s.parity.clone();
    let closed = if s.partner(i) == j {
        if s.parity[i] ^ cap == 1 {
            LoopClosed::NonContractible
        } else {
            LoopClosed::Contractible
        }
    } else {
        let (a, b) = (s.partner(i), s.partner(j));
        let joined = s.parity[i] ^ s.parity[j] ^ cap;
        partner[a] = b as u8;
        partner[b] = a as u8;
        parity[a] = joined;
        parity[b] = joined;
        LoopClosed::None
    };
    partner[i] = j as u8;
    partner[j] = i as u8;
    parity[i] = cap;
    parity[j] = cap;
    (LinkState { partner, parity }, closed)
}

/// All states reachable from the nested pattern under the generators,
/// in canonical order.
pub fn enumerate_states(l: usize) -> Result<Vec<LinkState>> {
    if l < 2 || l % 2 == 1 || l > MAX_ENUMERATION_L {
        return Err(Error::InvalidArgument(format!("L = {l} must be even and in 2..={MAX_ENUMERATION_L}")));
    }
    let start = LinkState::nested(l);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for i in 0..l {
            let (next, _) = apply_generator(&s, i);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_states_and_closures() {
        let states = enumerate_states(2).unwrap();
        assert_eq!(states.len(), 2);
        let plain = LinkState::from_chords(2, &[(0, 1, 0)]).unwrap();
        let wound = LinkState::from_chords(2, &[(0, 1, 1)]).unwrap();
        assert_eq!(apply_generator(&plain, 0), (plain.clone(), LoopClosed::Contractible));
        assert_eq!(apply_generator(&wound, 0), (plain.clone(), LoopClosed::NonContractible));
        assert_eq!(apply_generator(&plain, 1).1, LoopClosed::NonContractible);
        assert_eq!(apply_generator(&wound, 1).1, LoopClosed::Contractible);
    }

    #[test]
    fn state_counts_are_central_binomials() {
        for (l, count) in [(2, 2), (4, 6), (6, 20), (8, 70), (10, 252)] {
            let states = enumerate_states(l).unwrap();
            assert_eq!(states.len(), count, "L = {l}");
            assert!(states.iter().all(LinkState::is_planar));
            assert!(states.contains(&LinkState::adjacent(l)));
        }
    }

    #[test]
    fn closure_is_a_fixed_point() {
        let states = enumerate_states(6).unwrap();
        let set: BTreeSet<_> = states.iter().cloned().collect();
        for s in &states {
            for i in 0..6 {
                assert!(set.contains(&apply_generator(s, i).0));
            }
        }
    }

    #[test]
    fn total_parity_changes_only_at_the_wrap() {
        let total = |s: &LinkState| s.chords().iter().map(|c| c.2 as u32).sum::<u32>() % 2;
        for s in enumerate_states(4).unwrap() {
            for i in 0..3 {
                let (next, closed) = apply_generator(&s, i);
                let lost = u32::from(closed == LoopClosed::NonContractible);
                assert_eq!((total(&next) + lost) % 2, total(&s), "{s:?} e_{i}");
            }
        }
    }

    #[test]
    fn crossing_chords_rejected() {
        assert!(LinkState::from_chords(4, &[(0, 2, 0), (1, 3, 0)]).is_err());
        assert!(LinkState::from_chords(4, &[(0, 1, 1), (2, 3, 1)]).is_err());
        assert!(LinkState::from_chords(4, &[(0, 1, 1), (2, 3, 0)]).is_ok());
        assert!(LinkState::from_chords(4, &[(0, 3, 1), (1, 2, 0)]).is_ok());
        assert!(LinkState::from_chords(3, &[(0, 1, 0)]).is_err());
        assert!(enumerate_states(14).is_err());
    }
}

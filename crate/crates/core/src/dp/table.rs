//! Row keys and bag-local indexing.
//!
//! Bag arguments are addressed by their position in the (sorted) bag, and
//! attacks between bag arguments by their position in the bag's local attack
//! list, ordered by (source position, target position). Masks are remapped
//! whenever a node adds or drops an argument.

use indexmap::IndexMap;

use crate::af::Af;
use crate::error::{Error, Result};

pub(crate) const MAX_BAG_ARGS: usize = 64;
pub(crate) const MAX_BAG_ATTACKS: usize = 128;

/// Bag-local subframework plus labeling. Present arguments that are neither
/// `lin` nor `lund` are labelled `O`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Structure {
    pub present: u64,
    pub lin: u64,
    pub lund: u64,
    pub atts: u128,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Witness {
    pub out: u64,
    pub und: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct RowKey {
    pub s: Structure,
    pub w: Witness,
}

pub(crate) type Table<P> = IndexMap<RowKey, P>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Lab {
    In,
    Out,
    Und,
}

impl Structure {
    pub fn label(&self, pos: usize) -> Option<Lab> {
        let bit = 1u64 << pos;
        if self.present & bit == 0 {
            None
        } else if self.lin & bit != 0 {
            Some(Lab::In)
        } else if self.lund & bit != 0 {
            Some(Lab::Und)
        } else {
            Some(Lab::Out)
        }
    }

    pub fn has_attack(&self, local: usize) -> bool {
        self.atts >> local & 1 == 1
    }
}

/// Opens a zero bit at `pos`, shifting higher bits up.
pub(crate) fn insert_bit(mask: u64, pos: usize) -> u64 {
    let low = mask & ((1u64 << pos) - 1);
    let high = (mask >> pos).checked_shl(pos as u32 + 1).unwrap_or(0);
    low | high
}

/// Deletes the bit at `pos`, shifting higher bits down.
pub(crate) fn remove_bit(mask: u64, pos: usize) -> u64 {
    let low = mask & ((1u64 << pos) - 1);
    let high = mask.checked_shr(pos as u32 + 1).unwrap_or(0) << pos;
    low | high
}

/// Moves local attack bits according to `map` (old index → new index, or dropped).
pub(crate) fn remap_attacks(mut atts: u128, map: &[Option<u8>]) -> u128 {
    let mut out = 0u128;
    while atts != 0 {
        let i = atts.trailing_zeros() as usize;
        atts &= atts - 1;
        if let Some(j) = map[i] {
            out |= 1u128 << j;
        }
    }
    out
}

/// Positions and local attacks of one bag.
#[derive(Debug, Clone)]
pub(crate) struct BagInfo {
    pub args: Vec<usize>,
    /// Global attack ids, ordered by (source position, target position).
    pub atts: Vec<usize>,
    /// (source position, target position) per local attack.
    pub ends: Vec<(usize, usize)>,
}

impl BagInfo {
    pub fn new(af: &Af, bag: &[usize]) -> Result<Self> {
        if bag.len() > MAX_BAG_ARGS {
            return Err(Error::Capacity(format!(
                "bag with {} arguments exceeds the {MAX_BAG_ARGS}-argument row layout",
                bag.len()
            )));
        }
        let mut local = Vec::new();
        for (sp, &x) in bag.iter().enumerate() {
            for &i in af.outgoing(x) {
                if let Ok(tp) = bag.binary_search(&af.attack(i).target) {
                    local.push(((sp, tp), i));
                }
            }
        }
        if local.len() > MAX_BAG_ATTACKS {
            return Err(Error::Capacity(format!(
                "bag with {} attacks exceeds the {MAX_BAG_ATTACKS}-attack row layout",
                local.len()
            )));
        }
        local.sort_unstable();
        Ok(BagInfo {
            args: bag.to_vec(),
            atts: local.iter().map(|&(_, i)| i).collect(),
            ends: local.iter().map(|&(e, _)| e).collect(),
        })
    }

    pub fn pos(&self, arg: usize) -> Option<usize> {
        self.args.binary_search(&arg).ok()
    }

    pub fn local(&self, attack: usize) -> Option<usize> {
        self.atts.iter().position(|&i| i == attack)
    }

    /// For each local attack of `self`, its index in `other` (if any).
    pub fn attack_map(&self, other: &BagInfo) -> Vec<Option<u8>> {
        self.atts.iter().map(|&i| other.local(i).map(|j| j as u8)).collect()
    }
}

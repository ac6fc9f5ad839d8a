//! Forced labeling and the instance reductions it licenses.
//!
//! An argument is forced `I` when each of its attackers is forced `O`; it is
//! forced `O` when some certain attacker, via a certain attack, is forced `I`.
//! The least fixed point of these two rules holds in every subframework in
//! which the argument is present.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::af::ArgSet;
use crate::error::Result;
use crate::paf::Paf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedLabeling {
    pub forced_in: ArgSet,
    pub forced_out: ArgSet,
}

/// Least fixed point of the forced-label operator, starting from the empty labeling.
pub fn forced_labeling(paf: &Paf) -> ForcedLabeling {
    let af = paf.af();
    let mut forced_in = af.empty_set();
    let mut forced_out = af.empty_set();
    // each productive round labels at least one more argument
    for _ in 0..=af.len() {
        let mut next_in = forced_in.clone();
        let mut next_out = forced_out.clone();
        for a in 0..af.len() {
            if af.incoming(a).iter().all(|&i| forced_out.contains(af.attack(i).source)) {
                next_in.insert(a);
            }
            let killed = af.incoming(a).iter().any(|&i| {
                let b = af.attack(i).source;
                paf.arg_certain(b) && paf.att_certain(i) && forced_in.contains(b)
            });
            if killed {
                next_out.insert(a);
            }
        }
        if next_in == forced_in && next_out == forced_out {
            break;
        }
        forced_in = next_in;
        forced_out = next_out;
    }
    debug_assert!(forced_in.is_disjoint(&forced_out));
    ForcedLabeling { forced_in, forced_out }
}

/// Outcome of simplifying a `P-Ext` (complete semantics) query.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum ExtReduction {
    /// The probability is zero.
    Zero,
    /// `P-Ext(paf, S) = multiplier · P-Ext(reduced, set)`.
    Reduced {
        paf: Paf,
        multiplier: BigRational,
        /// The query set, re-indexed into `paf`.
        set: ArgSet,
        /// Names of the deleted arguments.
        removed: Vec<String>,
    },
}

/// Applies the forced labeling to a complete-semantics `P-Ext` query for `set`.
///
/// Zero when `set` meets the forced-out arguments, or a certain forced-in
/// argument lies outside `set`. Otherwise every uncertain forced-in argument
/// outside `set` is deleted and the multiplier picks up `1 - P(a)`.
pub fn simplify_for_ext(paf: &Paf, set: &ArgSet) -> Result<ExtReduction> {
    let af = paf.af();
    af.check_set(set)?;
    let forced = forced_labeling(paf);
    if !set.is_disjoint(&forced.forced_out) {
        return Ok(ExtReduction::Zero);
    }
    let mut removed = af.empty_set();
    let mut multiplier = BigRational::one();
    for a in forced.forced_in.ones().filter(|&a| !set.contains(a)) {
        if paf.arg_certain(a) {
            return Ok(ExtReduction::Zero);
        }
        multiplier *= BigRational::one() - paf.arg_prob(a);
        removed.insert(a);
    }
    let names = af.set_names(&removed).into_iter().map(String::from).collect();
    let (reduced, map) = paf.without(&removed);
    let mut new_set = reduced.af().empty_set();
    for a in set.ones() {
        new_set.insert(map[a].expect("query members are never removed"));
    }
    debug_assert!(!multiplier.is_zero());
    Ok(ExtReduction::Reduced { paf: reduced, multiplier, set: new_set, removed: names })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccReduction {
    Zero,
    Unchanged,
}

/// `P-Acc` for `a` is zero when `a` is forced out.
pub fn simplify_for_acc(paf: &Paf, a: usize) -> Result<AccReduction> {
    let af = paf.af();
    if a >= af.len() {
        return Err(crate::error::Error::UnknownArgument(format!("#{a}")));
    }
    Ok(if forced_labeling(paf).forced_out.contains(a) { AccReduction::Zero } else { AccReduction::Unchanged })
}

//! Brute-force verification of the chosen limits and colimits.
//!
//! A chosen pullback or coequalizer is checked against its universal
//! property by exhausting *all* candidate mediating maps for every test
//! cone: existence and uniqueness both reduce to "exactly one candidate
//! survives". This is deliberately independent of how the constructions
//! are computed.

use crate::cat::{coequalizer, pullback, Morphism, Obj};
use crate::enumerate::{all_maps, hom_maps};
use crate::error::{Error, Result};
use crate::order::compose_maps;

/// Check the pullback of `p` and `f` against every cone whose apex is drawn
/// from `apexes`. Errors with a description of the first failure.
pub fn verify_pullback_universal(p: &Morphism, f: &Morphism, apexes: &[Obj]) -> Result<()> {
    let pb = pullback(p, f)?;
    if !pb.proj1.is_valid() || !pb.proj2.is_valid() {
        return Err(Error::Postcondition("pullback projection is not a morphism".into()));
    }
    if compose_maps(&pb.proj1.map, &p.map) != compose_maps(&pb.proj2.map, &f.map) {
        return Err(Error::Postcondition("pullback square does not commute".into()));
    }
    for t in apexes {
        for u in hom_maps(t, &p.source) {
            for v in hom_maps(t, &f.source) {
                if compose_maps(&u, &p.map) != compose_maps(&v, &f.map) {
                    continue;
                }
                let mut survivors = 0usize;
                for m in all_maps(t.carrier_len(), pb.object.carrier_len()) {
                    if compose_maps(&m, &pb.proj1.map) != u
                        || compose_maps(&m, &pb.proj2.map) != v
                    {
                        continue;
                    }
                    if Morphism::new(t.clone(), pb.object.clone(), m)
                        .map(|mm| mm.is_valid())
                        .unwrap_or(false)
                    {
                        survivors += 1;
                    }
                }
                if survivors != 1 {
                    return Err(Error::Postcondition(format!(
                        "pullback mediator count {survivors} ≠ 1 for a cone from a {}-element apex",
                        t.carrier_len()
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Check the coequalizer of the parallel pair `f, g` against every cocone
/// into an object drawn from `targets`.
pub fn verify_coequalizer_universal(f: &Morphism, g: &Morphism, targets: &[Obj]) -> Result<()> {
    let ce = coequalizer(f, g)?;
    if !ce.quotient.is_valid() {
        return Err(Error::Postcondition("coequalizer quotient is not a morphism".into()));
    }
    if compose_maps(&f.map, &ce.quotient.map) != compose_maps(&g.map, &ce.quotient.map) {
        return Err(Error::Postcondition("coequalizer fork does not commute".into()));
    }
    for t in targets {
        for h in hom_maps(&f.target, t) {
            if compose_maps(&f.map, &h) != compose_maps(&g.map, &h) {
                continue;
            }
            let mut survivors = 0usize;
            for m in all_maps(ce.object.carrier_len(), t.carrier_len()) {
                if compose_maps(&ce.quotient.map, &m) != h {
                    continue;
                }
                if Morphism::new(ce.object.clone(), t.clone(), m)
                    .map(|mm| mm.is_valid())
                    .unwrap_or(false)
                {
                    survivors += 1;
                }
            }
            if survivors != 1 {
                return Err(Error::Postcondition(format!(
                    "coequalizer mediator count {survivors} ≠ 1 for a cocone into a {}-element target",
                    t.carrier_len()
                )));
            }
        }
    }
    Ok(())
}

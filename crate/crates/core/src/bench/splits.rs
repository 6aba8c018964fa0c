//! The validation/test split protocol: 3-of-5 states per class validate, the
//! remaining 2 test, with 100 distinct combinations drawn from the
//! (5C3)⁶ = 10⁶ possibilities.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::stategen::{EvalState, SloccClass};

const PER_CLASS: usize = 5;
const VAL_PER_CLASS: usize = 3;

/// One validation/test partition of the 30 evaluation states, as indices into
/// the evaluation set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCombo {
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SplitPlan {
    pub combos: Vec<SplitCombo>,
}

/// Draw `n_combos` distinct validation/test combinations by rejection
/// sampling; deterministic in `seed`.
pub fn sample_splits(eval_set: &[EvalState], n_combos: usize, seed: u64) -> Result<SplitPlan> {
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); 6];
    for (i, st) in eval_set.iter().enumerate() {
        by_class[st.class.code() as usize].push(i);
    }
    for (code, members) in by_class.iter().enumerate() {
        if members.len() != PER_CLASS {
            return Err(Error::ClassCount {
                class: SloccClass::from_code(code as u8).unwrap().name().to_string(),
                expected: PER_CLASS,
                found: members.len(),
            });
        }
    }
    let available = 1_000_000usize; // (5 choose 3)^6
    if n_combos > available {
        return Err(Error::SplitSpace {
            requested: n_combos,
            available,
        });
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut combos = Vec::with_capacity(n_combos);
    while combos.len() < n_combos {
        let mut validation = Vec::with_capacity(6 * VAL_PER_CLASS);
        let mut test = Vec::with_capacity(6 * (PER_CLASS - VAL_PER_CLASS));
        for members in &by_class {
            let mut pool = members.clone();
            pool.shuffle(&mut rng);
            let (val, rest) = pool.split_at(VAL_PER_CLASS);
            let mut val = val.to_vec();
            let mut rest = rest.to_vec();
            val.sort_unstable();
            rest.sort_unstable();
            validation.extend(val);
            test.extend(rest);
        }
        if seen.insert(validation.clone()) {
            combos.push(SplitCombo { validation, test });
        }
    }
    Ok(SplitPlan { combos })
}

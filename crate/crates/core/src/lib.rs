/*!
Concentration of random minimum-weight set problems.

Each element of a ground set gets an i.i.d. weight `X` with `X^q` uniform or
exponential. For a family `F` of subsets (spanning trees of `K_n`, perfect
matchings of `K_{n,n}`, or an explicit list) the random variable of interest
is `M(F)`, the least total weight of a member.

The crate provides:

* exact solvers for `M(F)`, the Hamming distance `rho(G)` from a set to the
  family, cheapest patches, the budget variable `Z_L` and the neighbourhood
  optimum `M(B_r)`;
* the red-green coupling of one weight to two independent copies;
* closed-form bounds and constants;
* a seeded, parallel Monte Carlo engine with the experiments built on it.

```
use patchable::{FamilyInstance, WeightAssignment, WeightSpec};
use patchable::rng::{stream, Purpose};

let fam = FamilyInstance::spanning_tree(50)?;
let spec = WeightSpec::uniform(1.0)?;
let w = WeightAssignment::sample(&spec, fam.ground_size(), &mut stream(7, Purpose::Trial, 0));
let mst = fam.min_weight(&w)?;
assert_eq!(mst.witness.len(), 49);
assert_eq!(fam.rho(&mst.witness)?, 0);
# Ok::<(), patchable::Error>(())
```

The guide in `book/` walks through each concept; its code blocks are
compiled as doc-tests of this crate.
*/

pub mod bounds;
pub mod dual;
mod error;
pub mod families;
pub mod montecarlo;
pub mod oracle;
pub mod patching;
pub mod rng;
pub mod weights;

pub use error::{Error, Result};
pub use families::{FamilyInstance, FamilyKind, SolveResult, WeightAssignment};
pub use weights::{Base, WeightSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/weights.md")]
    mod weights {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/patching.md")]
    mod patching {}
    #[doc = include_str!("../../../book/src/dual.md")]
    mod dual {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

//! The fixed 200-slot action catalog, per-state validity masks and masked
//! selection rules.
//!
//! Layout: slots `0..121` discard `q` copies of face `v` at `(q-1)*11 + (v-1)`;
//! slots `121..198` do the same with one joker for `q <= 7`; slot 198 plays every
//! held joker on its own; slot 199 passes. Slots with `q > v` can never be legal.

mod catalog;
mod mask;
mod select;

pub use catalog::{
    catalog_csv, catalog_hash, decode, encode, encode_action, is_expressible, is_structurally_valid,
    ActionIndex, CatalogAction, ACTION_COUNT, ALL_JOKERS_SLOT, MAX_COPIES_WITH_JOKER, PASS_SLOT,
};
pub use mask::{possible_actions, MaskVector};
pub use select::{epsilon_greedy, masked_argmax, masked_uniform};

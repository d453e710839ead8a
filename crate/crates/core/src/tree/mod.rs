//! Binary trees, their vertical profiles and the profile triple `(Δ, M, S)`.

mod binary;
mod enumerate;
mod profile;
mod rescale;
mod sample;

pub use binary::{BinaryTree, Preorder};
pub use enumerate::{
    catalan, enumerate_trees, enumerate_trees_with_cap, TreeEnumerator, ENUMERATION_CAP,
};
pub use profile::{TriplePath, VerticalProfile, FORMAT_VERSION};
pub use rescale::{write_real_csv, RealTriple, RescaledTriple, Scaling};
pub use sample::{sample_uniform, stream_profile, MATERIALIZE_CAP, STREAM_CAP};

pub fn profile(tree: &BinaryTree) -> VerticalProfile {
    VerticalProfile::of_tree(tree)
}

pub fn rescale(profile: &VerticalProfile) -> RescaledTriple {
    RescaledTriple::new(profile, Scaling::QuarterPower)
}

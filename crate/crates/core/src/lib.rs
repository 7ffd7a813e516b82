//! Non-binary lifting of column-weight-2 CSS codes.
//!
//! The pipeline: a binary pair `(H_X, H_Z)` whose columns have weight 2 is
//! relabeled over GF(2^m) ([`lift`]), the toric instance of it keeps
//! dimension 2 over the extension field ([`toric`]), its binary image is a
//! qubit code of length `2 m n^2` ([`expand`]), and errors are decoded with
//! q-ary belief propagation ([`decode`], [`sim`]).

pub mod decode;
pub mod error;
pub mod expand;
pub mod gf;
pub mod io;
pub mod lift;
pub mod qmatrix;
pub mod sim;
pub mod toric;
pub mod verify;

pub use decode::{bp_decode, posterior_marginals, prior_from_bsc, BpDecoder, BpResult, DecoderConfig, Prior};
pub use error::{Error, Result};
pub use expand::{contract_vec, expand_matrix, expand_vec, BinaryExpandedPair};
pub use gf::{Elem, Field};
pub use lift::{lift_pair, BinaryCssPair, CssPairQ};
pub use qmatrix::{CycleWalk, SparseQMatrix, TannerGraph};
pub use sim::{run_sweep, run_sweep_on, ChannelModel, SimConfig, SimStats};
pub use toric::{brute_force_distance, build_skeleton, ExtendedToricCode, Side, ToricLayout};
pub use verify::{verify_pair, Construction, VerifyReport};

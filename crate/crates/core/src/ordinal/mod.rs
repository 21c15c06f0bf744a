//! Ordinals below epsilon_0, the pairing function and well-order codes.

mod cnf;
mod code;
mod pairing;

pub use cnf::{is_limit, ord_add, ord_cmp, ord_mul, ord_succ, Ordinal};
pub use code::{canonical_enumeration, canonical_index, code_to_ordinal, ordinal_to_code, OrderCode};
pub use pairing::{rho, rho_inv};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrdinalError {
    #[error("cannot parse ordinal {0:?}")]
    Parse(String),
    #[error("terms are not in Cantor normal form")]
    NotNormalForm,
    #[error("not a well-order code: {0}")]
    NotAWellOrderCode(String),
    #[error("ordinal is not below w^w")]
    TooLarge,
    #[error("order type is outside the recognised range")]
    UnrecognizedOrderType,
}

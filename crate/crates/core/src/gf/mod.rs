//! Characteristic-2 field tower GF(2) ⊂ GF(q) ⊂ GF(q^2), q = 2^m.
//!
//! GF(q) uses a polynomial basis in a primitive element `w`. GF(q^2) uses the
//! basis {1, δ} with δ^2 = δ + v and δ^q = δ + 1, which gives closed forms for
//! the Frobenius map, the norm and the relative trace:
//!
//! ```text
//! k^q     = (k0 + k1) + k1·δ
//! k^(q+1) = k0^2 + k0·k1 + v·k1^2
//! k + k^q = k1
//! ```

mod base;
mod ext;
mod parse;

pub use base::{default_modulus, BaseElem, BaseField, MAX_DEGREE};
pub use ext::{choose_v, ExtElem, ExtField, Tower};
pub use parse::{parse_base, parse_ext};

use serde::{Deserialize, Serialize};

/// Serialized description of a field tower, attached to every report so a
/// run can be reproduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub m: u32,
    pub modulus_bits: String,
    pub tower: Tower,
    pub v_bits: String,
}

impl FieldSpec {
    pub fn of(field: &ExtField) -> Self {
        FieldSpec {
            m: field.base().degree(),
            modulus_bits: format!("{:#x}", field.base().modulus()),
            tower: field.tower(),
            v_bits: format!("{:#x}", field.v().bits()),
        }
    }
}

/// JSON rendering of a base-field element: hex bitmask plus `w^i` form.
pub fn base_json(field: &BaseField, x: BaseElem) -> serde_json::Value {
    serde_json::json!({ "hex": format!("{:#x}", x.bits()), "w": field.power_notation(x) })
}

/// JSON rendering of an extension element: packed hex plus power form.
pub fn ext_json(field: &ExtField, x: ExtElem) -> serde_json::Value {
    serde_json::json!({ "hex": field.hex(x), "w": field.power_notation(x) })
}

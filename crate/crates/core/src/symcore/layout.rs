//! Bit layout of a specification's variables. Variables occupy consecutive
//! state bits in declaration order; integers are offset-binary.

use serde::Serialize;
use thiserror::Error;

use crate::speclang::{Owner, Specification, VarRef, VarType};

pub const MAX_STATE_BITS: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("specification needs {0} state bits, at most {MAX_STATE_BITS} are supported")]
    TooManyBits(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSlot {
    pub name: String,
    pub owner: Owner,
    pub vtype: VarType,
    pub first_bit: u32,
    pub width: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Bool(bool),
    Int(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub vars: Vec<VarSlot>,
    pub total_bits: u32,
}

impl Layout {
    pub fn from_spec(spec: &Specification) -> Result<Layout, LayoutError> {
        let mut vars = Vec::new();
        let mut next = 0u32;
        for d in &spec.decls {
            let width = d.vtype.bit_width();
            vars.push(VarSlot {
                name: d.name.clone(),
                owner: d.owner,
                vtype: d.vtype,
                first_bit: next,
                width,
            });
            next = next.saturating_add(width);
        }
        if next > MAX_STATE_BITS {
            return Err(LayoutError::TooManyBits(next));
        }
        Ok(Layout {
            vars,
            total_bits: next,
        })
    }

    pub fn slot(&self, name: &str) -> Option<&VarSlot> {
        self.vars.iter().find(|v| v.name == name)
    }

    /// State bit of a boolean reference (plain boolean or indexed array).
    pub fn bool_bit(&self, r: &VarRef) -> u32 {
        let s = self.slot(&r.name).expect("reference checked by the parser");
        s.first_bit + r.index.unwrap_or(0)
    }

    pub fn bits_of(&self, owner: Owner) -> Vec<u32> {
        self.vars
            .iter()
            .filter(|v| v.owner == owner)
            .flat_map(|v| v.first_bit..v.first_bit + v.width)
            .collect()
    }

    pub fn mask_of(&self, owner: Owner) -> u64 {
        self.bits_of(owner).iter().fold(0u64, |m, b| m | (1u64 << b))
    }

    fn raw(state: u64, s: &VarSlot) -> u64 {
        if s.width == 0 {
            0
        } else {
            (state >> s.first_bit) & (u64::MAX >> (64 - s.width))
        }
    }

    pub fn decode(&self, state: u64, s: &VarSlot) -> Value {
        match s.vtype {
            VarType::Bool => Value::Bool(state >> s.first_bit & 1 == 1),
            VarType::IntRange(lo, _) => Value::Int(lo + Self::raw(state, s) as i64),
            // Arrays decode to their raw bit pattern.
            VarType::BoolArray(_) => Value::Int(Self::raw(state, s) as i64),
        }
    }

    /// Integer value of an int variable in `state` (may exceed the range on
    /// invalid encodings).
    pub fn int_value(&self, state: u64, name: &str) -> i64 {
        let s = self.slot(name).expect("known variable");
        match s.vtype {
            VarType::IntRange(lo, _) => lo + Self::raw(state, s) as i64,
            _ => panic!("`{name}` is not an integer"),
        }
    }

    /// Whether every integer variable owned by one of `owners` has an
    /// in-range encoding.
    pub fn valid_for(&self, state: u64, owners: &[Owner]) -> bool {
        self.vars.iter().filter(|s| owners.contains(&s.owner)).all(|s| match s.vtype {
            VarType::IntRange(lo, hi) => Self::raw(state, s) <= (hi - lo) as u64,
            _ => true,
        })
    }

    pub fn valid(&self, state: u64) -> bool {
        self.valid_for(state, &[Owner::Env, Owner::Sys])
    }

    /// Encodes `value` for variable `name` into `state`.
    pub fn set(&self, state: u64, name: &str, value: Value) -> u64 {
        let s = self.slot(name).expect("known variable");
        let raw = match (s.vtype, value) {
            (VarType::IntRange(lo, _), Value::Int(v)) => (v - lo) as u64,
            (_, Value::Bool(b)) => b as u64,
            (_, Value::Int(v)) => v as u64,
        };
        if s.width == 0 {
            return state;
        }
        let mask = (u64::MAX >> (64 - s.width)) << s.first_bit;
        (state & !mask) | ((raw << s.first_bit) & mask)
    }

    /// Human-readable assignment: booleans as bools, arrays element-wise,
    /// integers decoded.
    pub fn assignment(&self, state: u64, owners: &[Owner]) -> Vec<(String, Value)> {
        let mut out = Vec::new();
        for s in self.vars.iter().filter(|s| owners.contains(&s.owner)) {
            match s.vtype {
                VarType::Bool => out.push((s.name.clone(), Value::Bool(state >> s.first_bit & 1 == 1))),
                VarType::BoolArray(n) => {
                    for k in 0..n {
                        let b = state >> (s.first_bit + k) & 1 == 1;
                        out.push((format!("{}[{k}]", s.name), Value::Bool(b)));
                    }
                }
                VarType::IntRange(..) => out.push((s.name.clone(), self.decode(state, s))),
            }
        }
        out
    }
}

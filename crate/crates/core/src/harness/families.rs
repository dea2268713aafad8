//! Parameterized specification families reconstructing the behaviors the
//! heuristics are measured on.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::speclang::{parse_spec, Specification};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    EunGood,
    EunBad,
    FprGood,
    FprBad,
    EfpGood,
    EfpBad,
    Deadlock,
    DdGood,
    DdBad,
    IncGood,
    IncBad,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::EunGood,
        Family::EunBad,
        Family::FprGood,
        Family::FprBad,
        Family::EfpGood,
        Family::EfpBad,
        Family::Deadlock,
        Family::DdGood,
        Family::DdBad,
        Family::IncGood,
        Family::IncBad,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::EunGood => "EUN_GOOD",
            Family::EunBad => "EUN_BAD",
            Family::FprGood => "FPR_GOOD",
            Family::FprBad => "FPR_BAD",
            Family::EfpGood => "EFP_GOOD",
            Family::EfpBad => "EFP_BAD",
            Family::Deadlock => "DEADLOCK",
            Family::DdGood => "DD_GOOD",
            Family::DdBad => "DD_BAD",
            Family::IncGood => "INC_GOOD",
            Family::IncBad => "INC_BAD",
        }
    }

    /// Whether the size parameter changes the specification.
    pub fn scaled(self) -> bool {
        !matches!(self, Family::DdGood | Family::DdBad | Family::IncGood | Family::IncBad)
    }

    /// Smallest accepted size parameter.
    pub fn min_n(self) -> u64 {
        match self {
            Family::EunGood | Family::EunBad => 4,
            Family::EfpGood | Family::EfpBad => 1,
            _ => 1,
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Source text of a family member. For the EFP families `n` is the number
/// of justice guarantees; for the counter families it is the top of the
/// counter range; the remaining families ignore it.
pub fn family_text(n: u64, family: Family) -> String {
    let n = n.max(family.min_n());
    let mut t = String::new();
    match family {
        Family::EfpGood | Family::EfpBad => {
            writeln!(t, "sys boolean[{n}] a;").unwrap();
            for k in 0..n {
                writeln!(t, "gar keep{k}: G next(a[{k}]) = a[{k}];").unwrap();
            }
            let all: Vec<String> = (0..n).map(|k| format!("a[{k}]")).collect();
            let all = all.join(" & ");
            let singles: Vec<String> = (1..n).map(|k| format!("gar j{k}: GF a[{k}];")).collect();
            if family == Family::EfpGood {
                writeln!(t, "gar all: GF {all};").unwrap();
                for s in singles {
                    writeln!(t, "{s}").unwrap();
                }
            } else {
                for s in singles {
                    writeln!(t, "{s}").unwrap();
                }
                writeln!(t, "gar all: GF {all};").unwrap();
            }
        }
        Family::EunGood | Family::EunBad => {
            let start = if family == Family::EunGood { n - 2 } else { 3 };
            writeln!(t, "sys Int(0..{n}) c;").unwrap();
            writeln!(t, "gar start: c = {start};").unwrap();
            writeln!(t, "gar step: G next(c) = c + 2 | (c <= 2 & next(c) <= 2);").unwrap();
        }
        Family::FprGood | Family::FprBad => {
            writeln!(t, "sys Int(0..{n}) c;").unwrap();
            writeln!(t, "sys boolean two;").unwrap();
            writeln!(t, "gar count: G next(c) = c + 1 | (c = {n} & next(c) = 0);").unwrap();
            writeln!(t, "gar keep: G next(two) = two;").unwrap();
            if family == Family::FprGood {
                writeln!(t, "asm GF c = {n};").unwrap();
            } else {
                writeln!(t, "asm GF two & c = 0;").unwrap();
            }
            writeln!(t, "gar reach: GF two & c = 0;").unwrap();
        }
        Family::Deadlock => {
            writeln!(t, "env boolean y;").unwrap();
            writeln!(t, "sys Int(0..{n}) x;").unwrap();
            writeln!(t, "gar inc: G next(y) -> next(x) = x + 1;").unwrap();
        }
        Family::DdGood => {
            t.push_str(
                "env boolean req;\n\
                 sys boolean grant;\n\
                 sys boolean ack;\n\
                 gar g1: GF grant;\n\
                 gar g2: GF !grant;\n\
                 gar g3: G next(ack) = grant;\n\
                 gar g4: G next(req) -> !next(grant);\n",
            );
        }
        Family::DdBad => {
            t.push_str(
                "env boolean req;\n\
                 sys boolean grant;\n\
                 sys boolean ack;\n\
                 gar g1: G grant = next(req);\n\
                 gar g2: GF grant;\n\
                 gar g3: GF !grant;\n\
                 gar g4: G next(ack) = grant;\n",
            );
        }
        Family::IncGood | Family::IncBad => {
            t.push_str("sys boolean x;\nsys boolean y;\ngar g1: G next(y) != y;\n");
            if family == Family::IncGood {
                t.push_str("gar g2: G x;\ngar g3: GF y;\ngar g4: G !x;\n");
            } else {
                t.push_str("gar g2: GF x;\ngar g3: GF y;\ngar g4: G !next(x);\n");
            }
        }
    }
    t
}

pub fn generate_counter_family(n: u64, family: Family) -> Specification {
    parse_spec(&family_text(n, family)).expect("family text parses")
}

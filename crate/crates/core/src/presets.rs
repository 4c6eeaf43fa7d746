//! The 5G NR CRC generators with their applicable code-length intervals,
//! and the candidate generators the result tables compare them against.

use crate::error::{domain, Result};
use crate::poly::Generator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub generator: u64,
    pub min_len: usize,
    pub max_len: usize,
}

impl Preset {
    pub fn generator(&self) -> Generator {
        Generator::new(self.generator).expect("preset generators are valid")
    }

    pub fn p(&self) -> u32 {
        self.generator().degree()
    }
}

/// CRC24C is used both for downlink control (up to 164 bits) and for
/// broadcast (up to 8448 bits); the two intervals are separate presets.
pub const NR_PRESETS: &[Preset] = &[
    Preset { name: "crc6", generator: 0x61, min_len: 18, max_len: 25 },
    Preset { name: "crc11", generator: 0xe21, min_len: 31, max_len: 1717 },
    Preset { name: "crc16", generator: 0x11021, min_len: 17, max_len: 3840 },
    Preset { name: "crc24a", generator: 0x1864cfb, min_len: 3848, max_len: 8448 },
    Preset { name: "crc24b", generator: 0x1800063, min_len: 25, max_len: 8448 },
    Preset { name: "crc24c-dci", generator: 0x1b2b117, min_len: 25, max_len: 164 },
    Preset { name: "crc24c", generator: 0x1b2b117, min_len: 25, max_len: 8448 },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    NR_PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

/// Code length for a payload of `payload` bits protected by `p` check bits.
pub fn payload_to_length(payload: usize, p: u32) -> Result<usize> {
    if payload < 1 {
        return Err(domain!("payload must be at least 1 bit"));
    }
    Ok(payload + p as usize)
}

/// The p=24 generators verified over `[25..8448]`: three interval-optimal
/// ones followed by CRC24A, CRC24B and CRC24C.
pub const P24_GENERATORS: [u64; 6] = [0x118b933, 0x125ae5d, 0x10f6f6d, 0x1864cfb, 0x1800063, 0x1b2b117];

/// CRC24C and the generator it is compared with over `[25..164]`.
pub const P24_SHORT_GENERATORS: [u64; 2] = [0x1b2b117, 0x118b983];

pub const P16_GENERATORS: [u64; 2] = [0x1a2eb, 0x11021];

pub const P11_GENERATORS: [u64; 2] = [0xe0f, 0xe21];

pub const P6_INTERVAL: (usize, usize) = (18, 25);
pub const P11_INTERVAL: (usize, usize) = (31, 1717);
pub const P16_INTERVAL: (usize, usize) = (17, 3840);
pub const P24_INTERVAL: (usize, usize) = (25, 8448);
pub const P24_SHORT_INTERVAL: (usize, usize) = (25, 164);

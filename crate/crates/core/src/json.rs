//! JSON output with every float written to 17 significant digits, so that
//! doubles survive a write/read cycle bit for bit.

use std::io;

use serde::{Deserialize, Deserializer, Serialize};
use serde_json::ser::{Formatter, Serializer};

use crate::C64;

/// Compact output; the formatter prints `f64` as `d.dddddddddddddddde±x`.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExactFloats;

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` on one line with [`ExactFloats`].
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, ExactFloats);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// A complex number in user input: a bare real or `[re, im]`.
#[derive(Deserialize)]
#[serde(untagged)]
enum Loose {
    Real(f64),
    Pair(C64),
}

impl From<Loose> for C64 {
    fn from(l: Loose) -> Self {
        match l {
            Loose::Real(x) => C64::new(x, 0.0),
            Loose::Pair(z) => z,
        }
    }
}

pub fn loose_complex<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
    Loose::deserialize(d).map(Into::into)
}

pub fn loose_complex_vec<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
    Vec::<Loose>::deserialize(d).map(|v| v.into_iter().map(Into::into).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Deserialize)]
    struct Holder {
        #[serde(deserialize_with = "loose_complex_vec")]
        v: Vec<C64>,
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(to_string(&0.1).unwrap(), "1.0000000000000001e-1");
        assert_eq!(to_string(&vec![C64::new(1.0, -2.5)]).unwrap(), "[[1.0000000000000000e0,-2.5000000000000000e0]]");
    }

    #[test]
    fn loose_input() {
        let h: Holder = serde_json::from_str(r#"{"v": [1, 0.5, [0, -1]]}"#).unwrap();
        assert_eq!(h.v, vec![C64::new(1.0, 0.0), C64::new(0.5, 0.0), C64::new(0.0, -1.0)]);
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(re in any::<f64>().prop_filter("finite", |x| x.is_finite()), im in -1e300f64..1e300) {
            let z = C64::new(re, im);
            let back: C64 = serde_json::from_str(&to_string(&z).unwrap()).unwrap();
            prop_assert_eq!(back.re.to_bits(), z.re.to_bits());
            prop_assert_eq!(back.im.to_bits(), z.im.to_bits());
        }
    }
}

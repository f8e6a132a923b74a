//! Darknet hostname classification.
//!
//! A [`Domain`] is a canonical Tor or i2p hostname. Classification accepts
//! loosely formatted input (URLs, mixed case, ports, paths) and reduces it to
//! the lowercase host. Anything that is not a well-formed `.onion` or `.i2p`
//! name comes back as an [`InvalidReason`] value, never as an error.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Length of a v2 onion address body.
pub const ONION_V2_LEN: usize = 16;
/// Length of a v3 onion address body.
pub const ONION_V3_LEN: usize = 56;
/// Length of an i2p base32 destination hash.
pub const I2P_B32_LEN: usize = 52;

const MAX_LABEL_LEN: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Network {
    Tor,
    I2p,
}

impl Network {
    pub fn other(self) -> Network {
        match self {
            Network::Tor => Network::I2p,
            Network::I2p => Network::Tor,
        }
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Network::Tor => "Tor",
            Network::I2p => "i2p",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AddressKind {
    OnionV2,
    OnionV3,
    I2pNamed,
    I2pB32,
}

impl AddressKind {
    pub fn network(self) -> Network {
        match self {
            AddressKind::OnionV2 | AddressKind::OnionV3 => Network::Tor,
            AddressKind::I2pNamed | AddressKind::I2pB32 => Network::I2p,
        }
    }
}

impl fmt::Display for AddressKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AddressKind::OnionV2 => "onion-v2",
            AddressKind::OnionV3 => "onion-v3",
            AddressKind::I2pNamed => "i2p-named",
            AddressKind::I2pB32 => "i2p-b32",
        })
    }
}

/// Why a string was not accepted as a darknet domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvalidReason {
    /// Nothing left after trimming and stripping URL parts.
    Empty,
    /// Not a `.onion` or `.i2p` host.
    BadTld,
    /// Address body has the wrong length for its kind.
    BadLength,
    /// Characters outside the allowed alphabet.
    BadAlphabet,
}

impl InvalidReason {
    pub fn code(self) -> &'static str {
        match self {
            InvalidReason::Empty => "empty",
            InvalidReason::BadTld => "bad-tld",
            InvalidReason::BadLength => "bad-length",
            InvalidReason::BadAlphabet => "bad-alphabet",
        }
    }
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A classified darknet hostname.
///
/// Equality, ordering and hashing only look at the canonical form, so two
/// domains parsed from `HTTP://X.onion/` and `x.onion` are the same node.
#[derive(Debug, Clone)]
pub struct Domain {
    raw: Arc<str>,
    canonical: Arc<str>,
    kind: AddressKind,
}

impl Domain {
    /// Parses `name`, returning the classified domain or the reason it was rejected.
    pub fn parse(name: &str) -> Result<Domain, InvalidReason> {
        classify_domain(name)
    }

    /// The string as it appeared in the source.
    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn canonical(&self) -> &str {
        &self.canonical
    }

    pub fn as_str(&self) -> &str {
        &self.canonical
    }

    pub fn kind(&self) -> AddressKind {
        self.kind
    }

    pub fn network(&self) -> Network {
        self.kind.network()
    }

    /// A copy whose raw form is the canonical string.
    pub fn to_canonical(&self) -> Domain {
        Domain {
            raw: self.canonical.clone(),
            canonical: self.canonical.clone(),
            kind: self.kind,
        }
    }
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for Domain {}

impl PartialOrd for Domain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Domain {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical.cmp(&other.canonical)
    }
}

impl Hash for Domain {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical)
    }
}

pub(crate) fn is_base32(s: &str) -> bool {
    s.bytes().all(|b| matches!(b, b'a'..=b'z' | b'2'..=b'7'))
}

fn is_ldh_label(label: &str) -> bool {
    !label.is_empty()
        && label.len() <= MAX_LABEL_LEN
        && !label.starts_with('-')
        && !label.ends_with('-')
        && label
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-')
}

/// Reduces a URL-ish string to its lowercase host.
fn host_of(name: &str) -> String {
    let mut s = name.trim();
    if let Some(pos) = s.find("://") {
        s = &s[pos + 3..];
    } else if let Some(rest) = s.strip_prefix("//") {
        s = rest;
    }
    if let Some(end) = s.find(['/', '?', '#']) {
        s = &s[..end];
    }
    if let Some(at) = s.rfind('@') {
        s = &s[at + 1..];
    }
    if let Some(colon) = s.rfind(':') {
        if s[colon + 1..].bytes().all(|b| b.is_ascii_digit()) {
            s = &s[..colon];
        }
    }
    s.trim_end_matches('.').to_ascii_lowercase()
}

fn check_base32_body(body: &str, len: usize) -> Result<(), InvalidReason> {
    if body.len() != len {
        // Non-ASCII bytes make the byte length meaningless; call that an alphabet problem.
        if !body.is_ascii() {
            return Err(InvalidReason::BadAlphabet);
        }
        return Err(InvalidReason::BadLength);
    }
    if !is_base32(body) {
        return Err(InvalidReason::BadAlphabet);
    }
    Ok(())
}

/// Classifies an arbitrary string as a darknet domain.
///
/// Scheme, userinfo, port, path, query, fragment and trailing dots are
/// stripped; the rest is lowercased. Subdomains of an onion address are
/// dropped because Tor resolves only the address label. Multi-label i2p
/// names are kept whole.
pub fn classify_domain(name: &str) -> Result<Domain, InvalidReason> {
    let host = host_of(name);
    if host.is_empty() {
        return Err(InvalidReason::Empty);
    }

    let (canonical, kind) = if let Some(stem) = host.strip_suffix(".onion") {
        let body = stem.rsplit('.').next().unwrap_or(stem);
        let kind = match body.len() {
            ONION_V2_LEN => AddressKind::OnionV2,
            ONION_V3_LEN => AddressKind::OnionV3,
            _ if !body.is_ascii() => return Err(InvalidReason::BadAlphabet),
            _ => return Err(InvalidReason::BadLength),
        };
        check_base32_body(body, body.len())?;
        if stem.len() > body.len() {
            let subdomains = &stem[..stem.len() - body.len() - 1];
            if !subdomains.split('.').all(is_ldh_label) {
                return Err(InvalidReason::BadAlphabet);
            }
        }
        (format!("{body}.onion"), kind)
    } else if let Some(body) = host.strip_suffix(".b32.i2p") {
        check_base32_body(body, I2P_B32_LEN)?;
        (host.clone(), AddressKind::I2pB32)
    } else if let Some(stem) = host.strip_suffix(".i2p") {
        if stem.is_empty() {
            return Err(InvalidReason::BadLength);
        }
        if !stem.split('.').all(is_ldh_label) {
            return Err(InvalidReason::BadAlphabet);
        }
        (host.clone(), AddressKind::I2pNamed)
    } else {
        return Err(InvalidReason::BadTld);
    };

    Ok(Domain {
        raw: Arc::from(name),
        canonical: Arc::from(canonical),
        kind,
    })
}

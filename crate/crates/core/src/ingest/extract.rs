//! Harvesting darknet domains out of free text (HTML, paste dumps, logs).

use std::sync::OnceLock;

use regex::Regex;

use super::domain::{classify_domain, Domain};

fn host_pattern() -> &'static Regex {
    static PATTERN: OnceLock<Regex> = OnceLock::new();
    PATTERN.get_or_init(|| {
        Regex::new(
            r"(?i)(?:[a-z][a-z0-9+.-]*://)?[a-z0-9](?:[a-z0-9-]*[a-z0-9])?(?:\.[a-z0-9](?:[a-z0-9-]*[a-z0-9])?)*\.(?:onion|i2p)",
        )
        .expect("host pattern compiles")
    })
}

/// True when the match is followed by more hostname, e.g. `x.onion.to` or `x.i2pfoo`.
fn continues_host(rest: &[u8]) -> bool {
    match rest {
        [c, ..] if c.is_ascii_alphanumeric() || *c == b'-' => true,
        [b'.', c, ..] => c.is_ascii_alphanumeric(),
        _ => false,
    }
}

/// Returns every darknet domain in `text` with the byte offset of its mention.
///
/// The offset points at the start of the mention, which includes a URL scheme
/// when one is attached (`http://x.onion` is reported where `http` begins).
/// Matches are maximal hostnames ending in `.onion` or `.i2p`; candidates that
/// fail [`classify_domain`] (a 10-character onion, say) are skipped. Results
/// are in document order and repeated mentions are kept.
pub fn extract_domains(text: &str) -> Vec<(Domain, usize)> {
    let bytes = text.as_bytes();
    host_pattern()
        .find_iter(text)
        .filter(|m| !continues_host(&bytes[m.end()..]))
        .filter_map(|m| classify_domain(m.as_str()).ok().map(|d| (d, m.start())))
        .collect()
}

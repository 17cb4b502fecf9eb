//! Turning `--channel/--set/--kernel` input into a channel.

use std::collections::BTreeMap;

use qchan_core::channels::{self, KrausChannel, MemoryKernel};

use crate::error::CliError;

/// Kernel names accepted by `--kernel`, with the channel each applies to.
pub const KERNELS: [(&str, &str); 2] = [("daffer", "rtn"), ("linear", "nmd")];

/// Parses `k=v[,k=v...]`; later keys override earlier ones.
pub fn parse_assignments(input: &str) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for part in input.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("expected key=value, got `{part}`")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("`{v}` is not a number (key `{k}`)")))?;
        if !value.is_finite() {
            return Err(CliError::usage(format!("`{k}` must be finite")));
        }
        out.insert(k.trim().to_string(), value);
    }
    Ok(out)
}

/// Merges repeated `--set` flags.
pub fn merge_assignments(sets: &[String]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for s in sets {
        out.extend(parse_assignments(s)?);
    }
    Ok(out)
}

/// A channel plus the kernel value that produced it, if any.
#[derive(Debug, Clone)]
pub struct ResolvedChannel {
    pub channel: KrausChannel,
    pub kernel_value: Option<f64>,
}

fn take(params: &mut BTreeMap<String, f64>, channel: &str, key: &str) -> Result<f64, CliError> {
    params
        .remove(key)
        .ok_or_else(|| CliError::usage(format!("channel `{channel}` needs parameter `{key}`")))
}

fn no_leftovers(params: &BTreeMap<String, f64>, channel: &str) -> Result<(), CliError> {
    match params.keys().next() {
        Some(k) => Err(CliError::usage(format!(
            "unexpected parameter `{k}` for channel `{channel}`"
        ))),
        None => Ok(()),
    }
}

/// Builds the channel named `label`.
///
/// RTN and NMD accept either the kernel value directly (`lambda`, `omega`) or
/// the kernel's physical parameters: `t, gamma, b` for the `daffer` kernel and
/// `p` for the `linear` kernel. The kernel parameters select the default kernel
/// when `--kernel` is absent.
pub fn resolve_channel(
    label: &str,
    params: &BTreeMap<String, f64>,
    kernel: Option<&str>,
) -> Result<ResolvedChannel, CliError> {
    let mut rest = params.clone();
    let kernel_value = match (label, kernel) {
        ("rtn", k) if k == Some("daffer") || (k.is_none() && !rest.contains_key("lambda")) => {
            let t = take(&mut rest, label, "t")?;
            let gamma = take(&mut rest, label, "gamma")?;
            let b = take(&mut rest, label, "b")?;
            no_leftovers(&rest, label)?;
            let lambda = MemoryKernel::daffer(gamma, b)?.evaluate(t)?;
            rest.insert("lambda".into(), lambda);
            Some(lambda)
        }
        ("nmd", k) if k == Some("linear") || (k.is_none() && !rest.contains_key("omega")) => {
            let p = take(&mut rest, label, "p")?;
            no_leftovers(&rest, label)?;
            let omega = MemoryKernel::linear_dephasing().evaluate(p)?;
            rest.insert("omega".into(), omega);
            Some(omega)
        }
        (_, Some(k)) => {
            let valid = KERNELS.iter().any(|(name, ch)| *name == k && *ch == label);
            let msg = if valid {
                format!("kernel `{k}` conflicts with the direct kernel value")
            } else {
                format!("kernel `{k}` does not apply to channel `{label}`")
            };
            return Err(CliError::usage(msg));
        }
        _ => None,
    };
    let channel = channels::from_params(label, &rest)?;
    Ok(ResolvedChannel {
        channel,
        kernel_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use qchan_core::ChannelKind;

    fn map(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn parses_assignments() {
        let m = parse_assignments("p0=1, p1=0,p2=0 ,p3=0").unwrap();
        assert_eq!(
            m,
            map(&[("p0", 1.0), ("p1", 0.0), ("p2", 0.0), ("p3", 0.0)])
        );
        assert!(parse_assignments("gamma").is_err());
        assert!(parse_assignments("gamma=abc").is_err());
        assert!(parse_assignments("gamma=inf").is_err());
    }

    #[test]
    fn direct_and_kernel_routes() {
        let direct = resolve_channel("rtn", &map(&[("lambda", 0.5)]), None).unwrap();
        assert_eq!(direct.channel.kind(), ChannelKind::Rtn { lambda: 0.5 });
        assert_eq!(direct.kernel_value, None);

        let via_kernel =
            resolve_channel("rtn", &map(&[("t", 0.0), ("gamma", 1.0), ("b", 2.0)]), None).unwrap();
        assert_eq!(via_kernel.kernel_value, Some(1.0));

        let nmd = resolve_channel("nmd", &map(&[("p", 0.25)]), Some("linear")).unwrap();
        assert_eq!(nmd.channel.kind(), ChannelKind::Nmd { omega: 0.5 });
    }

    #[test]
    fn kernel_misuse_is_a_usage_error() {
        assert!(resolve_channel("pd", &map(&[("gamma", 0.5)]), Some("daffer")).is_err());
        assert!(resolve_channel("rtn", &map(&[("lambda", 0.5)]), Some("linear")).is_err());
        assert!(resolve_channel("rtn", &map(&[("t", 1.0), ("gamma", 1.0)]), None).is_err());
        assert!(resolve_channel(
            "rtn",
            &map(&[("t", 1.0), ("gamma", 1.0), ("b", 1.0), ("x", 1.0)]),
            None
        )
        .is_err());
    }
}

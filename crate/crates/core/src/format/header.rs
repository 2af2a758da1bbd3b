use super::wire::{count_u16, put_f32, put_string, put_u16, Reader};
use super::{FormatError, PoseComponent, PoseHeader};

/// Serializes a header. Equal headers always produce identical bytes.
pub fn encode_header(header: &PoseHeader) -> Result<Vec<u8>, FormatError> {
    header.validate()?;
    let mut out = Vec::with_capacity(header_size(header));
    put_f32(&mut out, header.version);
    put_u16(&mut out, header.width);
    put_u16(&mut out, header.height);
    put_u16(&mut out, header.depth);
    put_u16(&mut out, count_u16("component", header.components.len())?);

    for c in &header.components {
        put_string(&mut out, &c.name)?;
        put_string(&mut out, &c.format)?;
        put_u16(&mut out, count_u16("point", c.points.len())?);
        put_u16(&mut out, count_u16("limb", c.limbs.len())?);
        put_u16(&mut out, count_u16("color", c.colors.len())?);
        for p in &c.points {
            put_string(&mut out, p)?;
        }
        for &(from, to) in &c.limbs {
            put_u16(&mut out, from);
            put_u16(&mut out, to);
        }
        for rgb in &c.colors {
            for &channel in rgb {
                put_u16(&mut out, channel as u16);
            }
        }
    }
    Ok(out)
}

/// Encoded length of a header, without encoding it.
pub fn header_size(header: &PoseHeader) -> usize {
    let strings = |s: &str| 2 + s.len();
    12 + header
        .components
        .iter()
        .map(|c| {
            strings(&c.name)
                + strings(&c.format)
                + 6
                + c.points.iter().map(|p| strings(p)).sum::<usize>()
                + 4 * c.limbs.len()
                + 6 * c.colors.len()
        })
        .sum::<usize>()
}

/// Parses a header from the front of `bytes`, returning it with the number of
/// bytes consumed. Trailing bytes are not inspected.
pub fn decode_header(bytes: &[u8]) -> Result<(PoseHeader, usize), FormatError> {
    let mut r = Reader::new(bytes);
    let version = r.f32()?;
    if !(0.0999..=0.1001).contains(&version) {
        return Err(FormatError::UnsupportedVersion(version));
    }
    let width = r.u16()?;
    let height = r.u16()?;
    let depth = r.u16()?;
    let count = r.u16()? as usize;

    let mut components = Vec::with_capacity(count);
    for _ in 0..count {
        let name = r.string()?;
        let format = r.string()?;
        let n_points = r.u16()? as usize;
        let n_limbs = r.u16()? as usize;
        let n_colors = r.u16()? as usize;
        let points = (0..n_points).map(|_| r.string()).collect::<Result<Vec<_>, _>>()?;
        let limbs = (0..n_limbs)
            .map(|_| Ok((r.u16()?, r.u16()?)))
            .collect::<Result<Vec<_>, FormatError>>()?;
        let mut colors = Vec::with_capacity(n_colors);
        for _ in 0..n_colors {
            let mut rgb = [0u8; 3];
            for channel in &mut rgb {
                let v = r.u16()?;
                *channel = u8::try_from(v).map_err(|_| FormatError::ColorOutOfRange {
                    component: name.clone(),
                    value: v,
                })?;
            }
            colors.push(rgb);
        }
        components.push(PoseComponent {
            name,
            format,
            points,
            limbs,
            colors,
        });
    }

    let header = PoseHeader {
        version,
        width,
        height,
        depth,
        components,
    };
    header.validate()?;
    Ok((header, r.position()))
}

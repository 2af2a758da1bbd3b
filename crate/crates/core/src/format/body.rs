use super::wire::{count_u16, f32_block, put_f32_block, put_u16, Reader};
use super::{FormatError, PoseBody, PoseHeader};
use crate::tensor::{MaskedFrameTensor, Shape};

/// fps, frame count and people count, two bytes each.
pub const BODY_PREFIX_LEN: usize = 6;

/// Encoded size of a body with the given extents.
pub fn body_size(frames: usize, people: usize, points: usize, dims: usize) -> usize {
    BODY_PREFIX_LEN + frames * people * points * (dims + 1) * 4
}

/// Serializes fps, the advisory frame count, the people count, then the full
/// coordinate block followed by the full confidence block.
///
/// The frame count field holds the true count up to 65535 and 0 beyond that.
pub fn encode_body(body: &PoseBody) -> Result<Vec<u8>, FormatError> {
    let t = &body.tensor;
    let people = count_u16("people", t.people())?;
    let advisory = u16::try_from(t.frames()).unwrap_or(0);

    let mut out = Vec::with_capacity(body_size(t.frames(), t.people(), t.points(), t.dims()));
    put_u16(&mut out, body.fps);
    put_u16(&mut out, advisory);
    put_u16(&mut out, people);
    put_f32_block(&mut out, t.data());
    put_f32_block(&mut out, t.confidence());
    Ok(out)
}

/// Parses a body given its already-decoded header.
///
/// The frame count is inferred from the payload length; the stored field is only
/// consulted when a frame carries no bytes at all (zero people or zero points).
pub fn decode_body(bytes: &[u8], header: &PoseHeader) -> Result<PoseBody, FormatError> {
    let dims = header.dims().ok_or(FormatError::EmptyHeader)?;
    let points = header.total_points();

    let mut r = Reader::new(bytes);
    let fps = r.u16()?;
    let advisory = r.u16()? as usize;
    let people = r.u16()? as usize;

    let payload = bytes.len() - BODY_PREFIX_LEN;
    let per_frame = people * points * (dims + 1) * 4;
    let frames = if per_frame == 0 {
        if payload != 0 {
            return Err(FormatError::CorruptLength { payload, per_frame });
        }
        advisory
    } else {
        if !payload.is_multiple_of(per_frame) {
            return Err(FormatError::CorruptLength { payload, per_frame });
        }
        payload / per_frame
    };

    let shape = Shape::new(frames, people, points, dims)?;
    let data = f32_block(r.take(shape.cells() * 4)?);
    let confidence = f32_block(r.take(shape.slots() * 4)?);
    let tensor = MaskedFrameTensor::from_parts(shape, data, confidence)?;
    Ok(PoseBody { fps, tensor })
}

"""Standard MIDI File output, plus a decoder used to check what was written.

Files are format 1: track 0 holds the tempo, then one track per used channel in
channel order. Notes are written as explicit NoteOn/NoteOff pairs with full
status bytes (no running status) so byte diffs stay readable.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from fractions import Fraction

from .score import NOTE, PERCUSSION, PROGRAM, TEMPO, Score

VARLEN_MAX = 0x0FFFFFFF
NOTE_OFF, PROGRAM_CHANGE, NOTE_ON = "note_off", "program", "note_on"
SET_TEMPO = "tempo"
_ORDER = {NOTE_OFF: 0, PROGRAM_CHANGE: 1, NOTE_ON: 2}
_DATA_BYTES = {0x8: 2, 0x9: 2, 0xA: 2, 0xB: 2, 0xC: 1, 0xD: 1, 0xE: 2}


class MidiError(ValueError):
    pass


class MalformedChunk(MidiError):
    pass


class TruncatedFile(MidiError):
    pass


@dataclass(frozen=True)
class MidiEvent:
    tick: int
    kind: str
    channel: int | None = None
    key: int | None = None
    velocity: int | None = None
    program: int | None = None
    tempo: int | None = None
    track: int = 0

    def signature(self) -> tuple:
        """The event without its track number, for multiset comparisons."""
        return (self.tick, self.kind, self.channel, self.key, self.velocity, self.program, self.tempo)


def encode_varlen(value: int) -> bytes:
    if not 0 <= value <= VARLEN_MAX:
        raise MidiError(f"variable-length value {value} out of range")
    out = [value & 0x7F]
    value >>= 7
    while value:
        out.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(out))


def decode_varlen(data: bytes, offset: int = 0) -> tuple[int, int]:
    """Return (value, offset just past the quantity)."""
    value = 0
    for i in range(4):
        if offset + i >= len(data):
            raise TruncatedFile("variable-length quantity runs past end of data")
        byte = data[offset + i]
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, offset + i + 1
    raise MidiError("variable-length quantity longer than 4 bytes")


def beats_to_ticks(beats: Fraction, ppq: int) -> int:
    """Round half up."""
    return int(Fraction(beats) * ppq + Fraction(1, 2))


def tempo_microseconds(bpm: int) -> int:
    return beats_to_ticks(Fraction(60_000_000, bpm), 1)


def score_to_midi_events(score: Score) -> list[MidiEvent]:
    """The timed events ``encode_smf`` writes, in file order within each track."""
    tracks: dict[int, list[MidiEvent]] = {}
    tempo_events = []
    for e in score.events:
        if e.kind == TEMPO:
            tempo_events.append(MidiEvent(beats_to_ticks(e.start, score.ppq), SET_TEMPO,
                                          tempo=tempo_microseconds(e.bpm)))
            continue
        track = tracks.setdefault(e.channel, [])
        on = beats_to_ticks(e.start, score.ppq)
        if e.kind == PROGRAM:
            track.append(MidiEvent(on, PROGRAM_CHANGE, e.channel, program=e.program))
        elif e.kind in (NOTE, PERCUSSION):
            off = max(on + 1, beats_to_ticks(e.start + e.duration, score.ppq))
            track.append(MidiEvent(on, NOTE_ON, e.channel, e.pitch, e.velocity))
            track.append(MidiEvent(off, NOTE_OFF, e.channel, e.pitch, 0))
    if len(tempo_events) != 1:
        raise MidiError("score must carry exactly one tempo event")
    ordered = [tempo_events]
    for index, channel in enumerate(sorted(tracks), start=1):
        events = sorted(tracks[channel], key=lambda m: (m.tick, _ORDER[m.kind], m.key or 0, m.program or 0))
        ordered.append([MidiEvent(**{**m.__dict__, "track": index}) for m in events])
    return [m for track in ordered for m in track]


def _channel_bytes(m: MidiEvent) -> bytes:
    if m.kind == NOTE_ON:
        return bytes((0x90 | m.channel, m.key, m.velocity))
    if m.kind == NOTE_OFF:
        return bytes((0x80 | m.channel, m.key, m.velocity))
    if m.kind == PROGRAM_CHANGE:
        return bytes((0xC0 | m.channel, m.program))
    if m.kind == SET_TEMPO:
        return b"\xff\x51\x03" + m.tempo.to_bytes(3, "big")
    raise MidiError(f"cannot encode {m.kind}")


def _chunk(kind: bytes, body: bytes) -> bytes:
    return kind + struct.pack(">I", len(body)) + body


def encode_smf(score: Score) -> bytes:
    events = score_to_midi_events(score)
    ntracks = max(m.track for m in events) + 1
    chunks = []
    for track in range(ntracks):
        body = bytearray()
        last = 0
        for m in (m for m in events if m.track == track):
            if m.tick > VARLEN_MAX:
                raise MidiError(f"event at tick {m.tick} beyond the representable range")
            body += encode_varlen(m.tick - last)
            body += _channel_bytes(m)
            last = m.tick
        body += b"\x00\xff\x2f\x00"
        chunks.append(_chunk(b"MTrk", bytes(body)))
    header = _chunk(b"MThd", struct.pack(">HHH", 1, ntracks, score.ppq))
    return header + b"".join(chunks)


def _need(data: bytes, pos: int, count: int) -> None:
    if pos + count > len(data):
        raise TruncatedFile(f"need {count} bytes at offset {pos}, file has {len(data)}")


def read_header(data: bytes) -> tuple[int, int, int]:
    """(format, track count, division)."""
    _need(data, 0, 14)
    if data[:4] != b"MThd":
        raise MalformedChunk("file does not start with MThd")
    length = struct.unpack(">I", data[4:8])[0]
    if length < 6:
        raise MalformedChunk(f"header length {length} < 6")
    _need(data, 8, length)
    return struct.unpack(">HHH", data[8:14])


def _decode_track(data: bytes, track: int) -> list[MidiEvent]:
    events = []
    pos, tick, status = 0, 0, None
    while pos < len(data):
        delta, pos = decode_varlen(data, pos)
        tick += delta
        _need(data, pos, 1)
        byte = data[pos]
        if byte == 0xFF:
            _need(data, pos, 2)
            meta = data[pos + 1]
            length, pos = decode_varlen(data, pos + 2)
            _need(data, pos, length)
            payload = data[pos : pos + length]
            pos += length
            if meta == 0x51 and length == 3:
                events.append(MidiEvent(tick, SET_TEMPO, tempo=int.from_bytes(payload, "big"), track=track))
            elif meta == 0x2F:
                return events
            continue
        if byte in (0xF0, 0xF7):
            length, pos = decode_varlen(data, pos + 1)
            _need(data, pos, length)
            pos += length
            continue
        if byte & 0x80:
            status = byte
            pos += 1
        elif status is None:
            raise MalformedChunk("data byte with no running status")
        kind, channel = status >> 4, status & 0x0F
        count = _DATA_BYTES.get(kind)
        if count is None:
            raise MalformedChunk(f"unsupported status byte 0x{status:02x}")
        _need(data, pos, count)
        a = data[pos]
        b = data[pos + 1] if count == 2 else None
        pos += count
        if kind == 0x9 and b:
            events.append(MidiEvent(tick, NOTE_ON, channel, a, b, track=track))
        elif kind in (0x8, 0x9):
            events.append(MidiEvent(tick, NOTE_OFF, channel, a, b if kind == 0x8 else 0, track=track))
        elif kind == 0xC:
            events.append(MidiEvent(tick, PROGRAM_CHANGE, channel, program=a, track=track))
    raise TruncatedFile(f"track {track} has no End-of-Track event")


def decode_smf(data: bytes) -> list[MidiEvent]:
    """All tempo, program and note events with absolute ticks, in file order."""
    _, ntracks, _ = read_header(data)
    pos = 8 + struct.unpack(">I", data[4:8])[0]
    events: list[MidiEvent] = []
    track = 0
    while track < ntracks:
        _need(data, pos, 8)
        kind, length = data[pos : pos + 4], struct.unpack(">I", data[pos + 4 : pos + 8])[0]
        pos += 8
        _need(data, pos, length)
        if kind == b"MTrk":
            events += _decode_track(data[pos : pos + length], track)
            track += 1
        elif not kind.isalpha():
            raise MalformedChunk(f"bad chunk id {kind!r}")
        pos += length
    return events

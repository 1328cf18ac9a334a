// Bundle wire encoding, byte-for-byte compatible with the service:
//
//   frame := len:u32 body
//   body  := "RB" ver:u8=1
//            id:str origin:str destination:str      str := len:u16 utf8
//            kind:u8 priority:u8
//            created_ms:u64 lamport:u64 ttl_s:u64 hop:u32
//            payload_len:u32 payload
//
// All integers big-endian. kind: 0 response_set, 1 observation, 2 ack.
// priority: 0 routine, 1 elevated. Broadcast destination is "*".

export type PayloadKind = 'response_set' | 'observation' | 'ack';
export type BundlePriority = 'routine' | 'elevated';

export interface BundleFields {
  bundleId: string;
  origin: string;
  destination: string;
  payloadKind: PayloadKind;
  priority: BundlePriority;
  createdMs: number;
  lamport: number;
  ttlSeconds: number;
  hopCount: number;
  payload: Uint8Array;
}

const KIND_CODES: Record<PayloadKind, number> = {
  response_set: 0,
  observation: 1,
  ack: 2,
};

const PRIORITY_CODES: Record<BundlePriority, number> = {
  routine: 0,
  elevated: 1,
};

const encoder = new TextEncoder();

function pushString(chunks: number[], value: string): void {
  const raw = encoder.encode(value);
  if (raw.length > 0xffff) {
    throw new Error('identifier too long for wire format');
  }
  chunks.push(raw.length >>> 8, raw.length & 0xff, ...raw);
}

function pushU32(chunks: number[], value: number): void {
  chunks.push((value >>> 24) & 0xff, (value >>> 16) & 0xff, (value >>> 8) & 0xff, value & 0xff);
}

function pushU64(chunks: number[], value: number): void {
  // Safe for values below 2^53; timestamps, clocks and TTLs sit well under that.
  let big = BigInt(value);
  const bytes: number[] = [];
  for (let i = 0; i < 8; i += 1) {
    bytes.unshift(Number(big & 0xffn));
    big >>= 8n;
  }
  chunks.push(...bytes);
}

export function encodeBundle(fields: BundleFields): Uint8Array {
  if (!fields.payload.length) {
    throw new Error('payload must be non-empty');
  }
  if (fields.ttlSeconds <= 0) {
    throw new Error('ttlSeconds must be positive');
  }
  const body: number[] = [0x52, 0x42, 0x01]; // "RB", version 1
  pushString(body, fields.bundleId);
  pushString(body, fields.origin);
  pushString(body, fields.destination);
  body.push(KIND_CODES[fields.payloadKind], PRIORITY_CODES[fields.priority]);
  pushU64(body, fields.createdMs);
  pushU64(body, fields.lamport);
  pushU64(body, fields.ttlSeconds);
  pushU32(body, fields.hopCount);
  pushU32(body, fields.payload.length);
  const frame: number[] = [];
  pushU32(frame, body.length + fields.payload.length);
  frame.push(...body);
  const out = new Uint8Array(frame.length + fields.payload.length);
  out.set(frame, 0);
  out.set(fields.payload, frame.length);
  return out;
}

export function toHex(bytes: Uint8Array): string {
  let hex = '';
  for (const byte of bytes) {
    hex += byte.toString(16).padStart(2, '0');
  }
  return hex;
}

export function encodeBundleHex(fields: BundleFields): string {
  return toHex(encodeBundle(fields));
}

// Domain types shared across the client. These mirror the service's JSON
// wire shapes exactly; the server remains the validation authority.

export type ItemKind = 'scale' | 'boolean' | 'free_text';

export interface Item {
  id: string;
  kind: ItemKind;
  label: string;
  required: boolean;
  min?: number;
  max?: number;
}

export interface Section {
  id: string;
  title: string;
  items: Item[];
}

export interface Instrument {
  id: string;
  version: number;
  title: string;
  sections: Section[];
}

export type UiMode = 'advanced' | 'standard' | 'checklist' | 'paper';

export const ALL_MODES: UiMode[] = ['advanced', 'standard', 'checklist', 'paper'];
export const DEFAULT_MODE: UiMode = 'standard';

export type AnswerValue = number | boolean | string;

export interface ResponseRecord {
  id: string;
  instrument_id: string;
  instrument_version: number;
  subject_id: string;
  answers: Record<string, AnswerValue>;
  completed_at: string; // ISO-8601 UTC
  entry_mode: UiMode;
  attachment?: string;
}

export interface Violation {
  itemId: string | null;
  reason: string;
}

export interface ConsentChoice {
  dataType: string;
  decision: 'granted' | 'denied';
}

// Minimal storage contract satisfied by window.localStorage and by the
// in-memory stand-in used in tests.
export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export class MemoryStorage implements StorageLike {
  private data = new Map<string, string>();

  getItem(key: string): string | null {
    return this.data.has(key) ? this.data.get(key)! : null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }

  removeItem(key: string): void {
    this.data.delete(key);
  }
}

/** Serialize a response with a stable key order, so equal answers produce
 * byte-identical payloads regardless of the navigation mode used. */
export function canonicalResponseJson(record: ResponseRecord): string {
  const ordered: Record<string, unknown> = {
    answers: sortedObject(record.answers),
    completed_at: record.completed_at,
    entry_mode: record.entry_mode,
    id: record.id,
    instrument_id: record.instrument_id,
    instrument_version: record.instrument_version,
    subject_id: record.subject_id,
  };
  if (record.attachment !== undefined) {
    ordered.attachment = record.attachment;
  }
  return JSON.stringify(sortedObject(ordered));
}

function sortedObject<T>(source: Record<string, T>): Record<string, T> {
  const out: Record<string, T> = {};
  for (const key of Object.keys(source).sort()) {
    out[key] = source[key] as T;
  }
  return out;
}

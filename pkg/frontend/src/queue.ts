// Durable offline queue: serialized bundles waiting for connectivity.
//
// Entries survive restarts (they live in storage), drain in order, and are
// removed only once the service has confirmed processing the bundle.

import type { StorageLike } from './types.js';

export interface QueueEntry {
  bundleId: string;
  responseId: string;
  frameHex: string;
  queuedAt: string;
}

interface QueueState {
  pending: QueueEntry[];
  lastSyncAt: string | null;
}

export class LocalQueue {
  private readonly storage: StorageLike;
  private readonly key: string;

  constructor(storage: StorageLike, key = 'ruralcare.queue') {
    this.storage = storage;
    this.key = key;
  }

  private load(): QueueState {
    const raw = this.storage.getItem(this.key);
    if (!raw) {
      return { pending: [], lastSyncAt: null };
    }
    try {
      return JSON.parse(raw) as QueueState;
    } catch {
      return { pending: [], lastSyncAt: null };
    }
  }

  private save(state: QueueState): void {
    this.storage.setItem(this.key, JSON.stringify(state));
  }

  pending(): QueueEntry[] {
    return this.load().pending;
  }

  lastSyncAt(): string | null {
    return this.load().lastSyncAt;
  }

  hasResponse(responseId: string): boolean {
    return this.load().pending.some((entry) => entry.responseId === responseId);
  }

  enqueue(entry: QueueEntry): void {
    const state = this.load();
    if (state.pending.some((e) => e.bundleId === entry.bundleId)) {
      return; // a bundle is queued at most once
    }
    state.pending.push(entry);
    this.save(state);
  }

  /** Remove entries the service has confirmed; records the sync time. */
  acknowledge(bundleIds: Iterable<string>, syncedAt: string): void {
    const confirmed = new Set(bundleIds);
    const state = this.load();
    state.pending = state.pending.filter((entry) => !confirmed.has(entry.bundleId));
    state.lastSyncAt = syncedAt;
    this.save(state);
  }

  size(): number {
    return this.load().pending.length;
  }
}

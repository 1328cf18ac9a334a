// Submission path: send when connected, queue a bundle when not.
//
// The queue drains on reconnect; the service deduplicates by response id and
// by bundle id, so a record reaches storage exactly once no matter how many
// times flushing retries.

import { ApiError, NetworkError, ServiceClient } from './api.js';
import { LocalQueue } from './queue.js';
import type { Instrument, ResponseRecord, StorageLike, Violation } from './types.js';
import { canonicalResponseJson } from './types.js';
import { distressFlagged, validateResponse } from './validation.js';
import { encodeBundleHex } from './wire.js';

const DEFAULT_TTL_SECONDS = 14 * 86400;
const SERVICE_NODE_ID = 'service';

export class ValidationBlocked extends Error {
  constructor(readonly violations: Violation[]) {
    super(violations.map((v) => `${v.itemId ?? 'response'}: ${v.reason}`).join('; '));
  }
}

export type SubmitOutcome = 'sent' | 'queued';

export class SubmissionManager {
  private readonly api: ServiceClient;
  private readonly queue: LocalQueue;
  private readonly storage: StorageLike;
  private readonly nodeId: string;
  private readonly clockKey: string;

  constructor(api: ServiceClient, storage: StorageLike, nodeId: string) {
    this.api = api;
    this.storage = storage;
    this.queue = new LocalQueue(storage);
    this.nodeId = nodeId;
    this.clockKey = `ruralcare.lamport.${nodeId}`;
  }

  pendingCount(): number {
    return this.queue.size();
  }

  private nextLamport(): number {
    const current = Number(this.storage.getItem(this.clockKey) ?? '0');
    const next = current + 1;
    this.storage.setItem(this.clockKey, String(next));
    return next;
  }

  /** Validate, then send or queue. Invalid drafts never leave the device. */
  async submit(instrument: Instrument, record: ResponseRecord): Promise<SubmitOutcome> {
    const violations = validateResponse(instrument, record);
    if (violations.length > 0) {
      throw new ValidationBlocked(violations);
    }
    if (this.queue.hasResponse(record.id)) {
      return 'queued'; // double-tap while offline: one queue entry
    }
    try {
      await this.api.submitResponse(record);
      return 'sent';
    } catch (error) {
      if (error instanceof ApiError && error.code === 'DuplicateSubmission') {
        return 'sent'; // double-tap while online: server already has it
      }
      if (!(error instanceof NetworkError)) {
        throw error;
      }
    }
    this.enqueueRecord(instrument, record);
    return 'queued';
  }

  private enqueueRecord(instrument: Instrument, record: ResponseRecord): void {
    const payload = new TextEncoder().encode(canonicalResponseJson(record));
    const flagged = distressFlagged(instrument, record.answers);
    const bundleId = `bundle-${record.id}`;
    const frameHex = encodeBundleHex({
      bundleId,
      origin: this.nodeId,
      destination: SERVICE_NODE_ID,
      payloadKind: 'response_set',
      priority: flagged ? 'elevated' : 'routine',
      createdMs: Date.parse(record.completed_at),
      lamport: this.nextLamport(),
      ttlSeconds: DEFAULT_TTL_SECONDS,
      hopCount: 0,
      payload,
    });
    this.queue.enqueue({
      bundleId,
      responseId: record.id,
      frameHex,
      queuedAt: new Date().toISOString(),
    });
  }

  /** Drain the queue in order; entries leave only on service confirmation. */
  async flush(): Promise<number> {
    const pending = this.queue.pending();
    if (pending.length === 0) {
      return 0;
    }
    let result;
    try {
      result = await this.api.postBundles(pending.map((entry) => entry.frameHex));
    } catch (error) {
      if (error instanceof NetworkError) {
        return 0; // still offline; keep everything
      }
      throw error;
    }
    const confirmed = result.statuses
      .filter((status) => status.bundle_id !== null)
      .map((status) => status.bundle_id as string);
    this.queue.acknowledge(confirmed, new Date().toISOString());
    return confirmed.length;
  }
}

/** Typed client for the squash service endpoints. */

import type { JobStatus, SquashResult } from './types.js';

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.status = status;
  }
}

export class ApiClient {
  baseUrl: string;
  private fetchImpl: FetchLike;
  private refilterSeq = 0;

  constructor(baseUrl = '', fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, '');
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === 'string') detail = body.detail;
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(response.status, `${path}: ${detail}`);
    }
    return (await response.json()) as T;
  }

  async submitDocument(text: string, config?: Record<string, unknown>): Promise<string> {
    const body: Record<string, unknown> = { text };
    if (config) body.config = config;
    const job = await this.request<JobStatus>('/api/squash', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
    return job.job_id;
  }

  getJob(jobId: string): Promise<JobStatus> {
    return this.request<JobStatus>(`/api/squash/${jobId}`);
  }

  /** Poll until the job leaves pending/running. */
  async pollJob(jobId: string, intervalMs = 1000): Promise<JobStatus> {
    for (;;) {
      const status = await this.getJob(jobId);
      if (status.status === 'done' || status.status === 'error') return status;
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }

  /**
   * Re-apply the QA budget server-side. Rapid successive calls supersede
   * each other: only the latest call resolves with a result, earlier
   * in-flight ones resolve with null (last write wins).
   */
  async refilter(
    jobId: string,
    generalFraction: number,
    specificFraction: number,
  ): Promise<SquashResult | null> {
    const seq = ++this.refilterSeq;
    const job = await this.request<JobStatus>(`/api/squash/${jobId}/refilter`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({
        general_fraction: generalFraction,
        specific_fraction: specificFraction,
      }),
    });
    if (seq !== this.refilterSeq) return null; // a newer request took over
    return job.result ?? null;
  }
}

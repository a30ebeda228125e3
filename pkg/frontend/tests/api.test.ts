import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError, type FetchLike } from '../src/api.js';

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'Content-Type': 'application/json' },
  });
}

describe('ApiClient', () => {
  it('submits documents and returns the job id', async () => {
    const calls: Array<{ url: string; body: unknown }> = [];
    const fake: FetchLike = async (url, init) => {
      calls.push({ url, body: JSON.parse(String(init?.body)) });
      return jsonResponse({ job_id: 'j1', status: 'pending' });
    };
    const client = new ApiClient('http://svc', fake);
    const jobId = await client.submitDocument('Some text.', { seed: 7 });
    expect(jobId).toBe('j1');
    expect(calls[0]!.url).toBe('http://svc/api/squash');
    expect(calls[0]!.body).toEqual({ text: 'Some text.', config: { seed: 7 } });
  });

  it('polls until the job is done', async () => {
    const states = ['pending', 'running', 'done'];
    let hits = 0;
    const fake: FetchLike = async () => {
      const status = states[Math.min(hits, states.length - 1)];
      hits += 1;
      return jsonResponse({
        job_id: 'j1',
        status,
        ...(status === 'done' ? { result: { paragraphs: [] } } : {}),
      });
    };
    const client = new ApiClient('http://svc', fake);
    const done = await client.pollJob('j1', 1);
    expect(done.status).toBe('done');
    expect(hits).toBe(3);
  });

  it('surfaces error detail from non-2xx replies', async () => {
    const fake: FetchLike = async () =>
      jsonResponse({ detail: 'general_fraction must be in (0, 1]' }, 400);
    const client = new ApiClient('http://svc', fake);
    await expect(client.refilter('j1', 1.5, 1.0)).rejects.toThrowError(ApiError);
    await expect(client.refilter('j1', 1.5, 1.0)).rejects.toThrow(/general_fraction/);
  });

  it('supersedes in-flight refilters: last write wins', async () => {
    const resolvers: Array<(r: Response) => void> = [];
    const fake: FetchLike = (_url, init) => {
      const body = JSON.parse(String(init?.body)) as { general_fraction: number };
      return new Promise<Response>((resolve) => {
        resolvers.push(() =>
          resolve(
            jsonResponse({
              job_id: 'j1',
              status: 'done',
              result: { marker: body.general_fraction },
            }),
          ),
        );
      });
    };
    const client = new ApiClient('http://svc', fake);

    const first = client.refilter('j1', 0.25, 1.0);
    const second = client.refilter('j1', 0.75, 1.0);
    // the slow first reply lands after the second was issued
    resolvers[1]!(undefined as never);
    resolvers[0]!(undefined as never);

    expect(await first).toBeNull();
    const winner = (await second) as unknown as { marker: number };
    expect(winner.marker).toBe(0.75);
  });
});

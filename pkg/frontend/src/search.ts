// Search console: query box, role selector, ranked results with the
// per-prong score breakdown, and a document detail pane. Scores are the
// server's values verbatim; each cell also carries the exact value in a
// data attribute so nothing is lost to display rounding.

import { ApiClient } from './api.js';
import { el } from './dom.js';
import type { CombinedHit, DocumentPayload, RolePayload } from './types.js';

export function formatScore(value: number): string {
  return value.toFixed(4);
}

export function renderHitRow(hit: CombinedHit): HTMLTableRowElement {
  const row = el('tr', {
    'data-doc': hit.doc_id,
    'data-qlm': String(hit.qlm_score),
    'data-topic-z': String(hit.topic_z),
    'data-entity-z': String(hit.entity_z),
    'data-combined': String(hit.combined),
  });
  row.append(
    el('td', { class: 'doc-id' }, hit.doc_id),
    el('td', { class: 'title' }, hit.title),
    el('td', { class: 'num qlm' }, formatScore(hit.qlm_score)),
    el('td', { class: 'num entity-z' }, formatScore(hit.entity_z)),
    el('td', { class: 'num topic-z' }, formatScore(hit.topic_z)),
    el('td', { class: 'num combined' }, formatScore(hit.combined)),
  );
  return row;
}

export function renderResults(table: HTMLElement, hits: CombinedHit[]): void {
  table.innerHTML = '';
  const head = el('tr');
  for (const label of ['doc', 'title', 'qlm', 'entity z', 'topic z', 'combined']) {
    head.append(el('th', {}, label));
  }
  table.append(head);
  for (const hit of hits) table.append(renderHitRow(hit));
}

export function renderDocumentDetail(pane: HTMLElement, doc: DocumentPayload): void {
  pane.innerHTML = '';
  pane.dataset['doc'] = doc.doc_id;
  pane.append(el('h3', {}, doc.title || doc.doc_id));
  const body = el('p', { class: 'doc-body' });
  body.textContent = doc.body;
  pane.append(body);
  if (doc.entity_distribution) {
    const entities = el('dl', { 'data-role': 'entity-distribution' });
    for (const [layer, dist] of Object.entries(doc.entity_distribution)) {
      for (const [node, share] of Object.entries(dist)) {
        entities.append(el('dt', {}, `${layer}: ${node}`));
        entities.append(el('dd', {}, formatScore(share)));
      }
    }
    pane.append(entities);
  }
  if (doc.topic_distribution) {
    const topics = el('p', { 'data-role': 'topic-distribution' });
    topics.textContent = doc.topic_distribution.map(formatScore).join(' / ');
    pane.append(topics);
  }
}

export class SearchConsole {
  constructor(private api: ApiClient, private root: HTMLElement) {}

  private results!: HTMLElement;
  private detail!: HTMLElement;
  private roleSelect!: HTMLSelectElement;
  private queryInput!: HTMLInputElement;

  async mount(): Promise<void> {
    this.root.innerHTML = '';
    this.queryInput = el('input', {
      type: 'text',
      placeholder: 'search query',
      'data-role': 'query',
    });
    this.roleSelect = el('select', { 'data-role': 'role-select' });
    this.roleSelect.append(el('option', { value: '' }, 'no role (keyword only)'));
    for (const role of await this.api.listRoles()) {
      this.roleSelect.append(el('option', { value: role.role_id }, roleLabel(role)));
    }
    const go = el('button', { 'data-role': 'run-search' }, 'Search');
    go.addEventListener('click', () => void this.run());
    this.results = el('table', { 'data-role': 'results' });
    this.detail = el('div', { 'data-role': 'document-detail' });
    this.root.append(this.queryInput, this.roleSelect, go, this.results, this.detail);
  }

  async run(): Promise<void> {
    const role = this.roleSelect.value || null;
    const response = await this.api.search(this.queryInput.value, role);
    renderResults(this.results, response.hits);
    for (const row of this.results.querySelectorAll('tr[data-doc]')) {
      row.addEventListener('click', () => {
        void this.showDocument((row as HTMLElement).dataset['doc']!);
      });
    }
  }

  async showDocument(docId: string): Promise<void> {
    renderDocumentDetail(this.detail, await this.api.document(docId));
  }
}

function roleLabel(role: RolePayload): string {
  const parts = [role.name];
  if (role.entity_target) parts.push(`entity ${role.entity_target}`);
  if (role.user_topic) parts.push(`topic ${role.user_topic}`);
  return parts.join(' | ');
}

// Role editor: pick an entity node from the knowledge-structure tree,
// pick a calibrated topic, and set the mixing weights. The sliders are
// constrained so the combination stays convex.

import { ApiClient } from './api.js';
import { el } from './dom.js';
import type { StructureNode, TopicPayload } from './types.js';

/**
 * Keep lambda1 + lambda2 <= 1 by shrinking the slider the user did not
 * touch. Values are already clamped to [0, 1] by the inputs.
 */
export function constrainWeights(
  changed: 'lambda1' | 'lambda2',
  lambda1: number,
  lambda2: number,
): { lambda1: number; lambda2: number } {
  if (lambda1 + lambda2 <= 1) return { lambda1, lambda2 };
  if (changed === 'lambda1') return { lambda1, lambda2: Math.max(0, 1 - lambda1) };
  return { lambda1: Math.max(0, 1 - lambda2), lambda2 };
}

/** Group structure nodes as region -> country -> city for the picker. */
export function structureTree(nodes: StructureNode[]): Map<string, Map<string, string[]>> {
  const byId = new Map(nodes.map((n) => [n.node_id, n]));
  const tree = new Map<string, Map<string, string[]>>();
  for (const node of nodes) {
    if (node.layer === 'region') tree.set(node.node_id, new Map());
  }
  for (const node of nodes) {
    if (node.layer !== 'country') continue;
    for (const [parent] of node.parents) {
      tree.get(parent)?.set(node.node_id, []);
    }
  }
  for (const node of nodes) {
    if (node.layer !== 'city_or_person') continue;
    for (const [countryId] of node.parents) {
      const country = byId.get(countryId);
      if (!country) continue;
      for (const [regionId] of country.parents) {
        tree.get(regionId)?.get(countryId)?.push(node.node_id);
      }
    }
  }
  return tree;
}

export class RoleEditor {
  lambda1 = 0.07;
  lambda2 = 0.9;

  constructor(private api: ApiClient, private root: HTMLElement) {}

  private name!: HTMLInputElement;
  private entitySelect!: HTMLSelectElement;
  private topicSelect!: HTMLSelectElement;
  private l1!: HTMLInputElement;
  private l2!: HTMLInputElement;
  private status!: HTMLElement;

  async mount(): Promise<void> {
    this.root.innerHTML = '';
    this.name = el('input', { type: 'text', placeholder: 'role name', 'data-role': 'role-name' });

    this.entitySelect = el('select', { 'data-role': 'entity-select' });
    this.entitySelect.append(el('option', { value: '' }, 'no entity target'));
    try {
      const { nodes } = await this.api.structure();
      const names = new Map(nodes.map((n) => [n.node_id, n.name]));
      for (const [regionId, countries] of structureTree(nodes)) {
        this.entitySelect.append(
          el('option', { value: regionId }, `region: ${names.get(regionId)}`),
        );
        for (const [countryId, cities] of countries) {
          this.entitySelect.append(
            el('option', { value: countryId }, `  country: ${names.get(countryId)}`),
          );
          for (const cityId of cities) {
            this.entitySelect.append(
              el('option', { value: cityId }, `    ${names.get(cityId)}`),
            );
          }
        }
      }
    } catch {
      // no structure built; entity targeting simply unavailable
    }

    this.topicSelect = el('select', { 'data-role': 'topic-select' });
    this.topicSelect.append(el('option', { value: '' }, 'no user topic'));
    for (const topic of await this.api.listTopics()) {
      if (topic.status === 'calibrated') {
        this.topicSelect.append(
          el('option', { value: topic.topic_id }, topicLabel(topic)),
        );
      }
    }

    this.l1 = this.slider('lambda1');
    this.l2 = this.slider('lambda2');
    this.syncSliders();

    const create = el('button', { 'data-role': 'create-role' }, 'Create role');
    create.addEventListener('click', () => void this.submit());
    this.status = el('p', { 'data-role': 'role-status' });
    this.root.append(
      el('h2', {}, 'Create a role'),
      this.name, this.entitySelect, this.topicSelect,
      labeled('topic weight', this.l1), labeled('entity weight', this.l2),
      create, this.status,
    );
  }

  private slider(which: 'lambda1' | 'lambda2'): HTMLInputElement {
    const input = el('input', {
      type: 'range', min: '0', max: '1', step: '0.01', 'data-role': which,
    });
    input.addEventListener('input', () => {
      const constrained = constrainWeights(
        which, parseFloat(this.l1.value), parseFloat(this.l2.value),
      );
      this.lambda1 = constrained.lambda1;
      this.lambda2 = constrained.lambda2;
      this.syncSliders();
    });
    return input;
  }

  private syncSliders(): void {
    this.l1.value = String(this.lambda1);
    this.l2.value = String(this.lambda2);
  }

  async submit(): Promise<void> {
    const entity = this.entitySelect.value || null;
    const topic = this.topicSelect.value || null;
    try {
      const role = await this.api.createRole({
        name: this.name.value.trim(),
        entity_target: entity,
        user_topic: topic,
        lambda1: topic ? this.lambda1 : 0,
        lambda2: entity ? this.lambda2 : 0,
      });
      this.status.textContent = `created ${role.role_id} (${role.name})`;
    } catch (error) {
      this.status.textContent = error instanceof Error ? error.message : String(error);
    }
  }
}

function labeled(text: string, input: HTMLElement): HTMLElement {
  const wrap = el('label');
  wrap.append(el('span', {}, text + ' '), input);
  return wrap;
}

function topicLabel(topic: TopicPayload): string {
  return `${topic.name} (${topic.topic_id}, correction ${topic.correction.toFixed(3)})`;
}

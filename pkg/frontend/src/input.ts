// Keyboard state to protocol actions. Arrows steer and thrust, space shoots;
// opposite arrows cancel. The sender is paced by the inbound state stream, so
// it can never exceed one action message per server tick.

import { ActionFrame, Turn } from './protocol.js'

export const MAPPED_KEYS: ReadonlySet<string> = new Set([
    'ArrowLeft', 'ArrowRight', 'ArrowUp', ' ',
])

export function heldToAction(held: ReadonlySet<string>): ActionFrame {
    let turn = 0
    if (held.has('ArrowLeft')) turn -= 1
    if (held.has('ArrowRight')) turn += 1
    return {
        type: 'action',
        turn: turn as Turn,
        thrust: held.has('ArrowUp'),
        shoot: held.has(' '),
    }
}

export class InputSender {
    private held = new Set<string>()

    constructor(private readonly send: (frame: ActionFrame) => void) {}

    /** Returns true when the key is one of ours (caller should preventDefault). */
    keyDown(key: string): boolean {
        if (!MAPPED_KEYS.has(key)) return false
        this.held.add(key)
        return true
    }

    keyUp(key: string): boolean {
        if (!MAPPED_KEYS.has(key)) return false
        this.held.delete(key)
        return true
    }

    releaseAll(): void {
        this.held.clear()
    }

    /** One composite action per received state frame, latest keys win. */
    onState(): void {
        this.send(heldToAction(this.held))
    }
}

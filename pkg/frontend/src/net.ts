// Socket plumbing: one PlaytestClient per session, dispatching typed server
// frames to hooks. The socket is passed in by its structural shape so tests
// can drive the client without a network.

import {
    ActionFrame, buildStartFrame, parseServerFrame, ResultFrame, StateFrame,
} from './protocol.js'

export interface SocketLike {
    send(data: string): void
    close(): void
    onmessage: ((ev: { data: unknown }) => void) | null
    onclose: (() => void) | null
}

export interface ClientHooks {
    onSession?(id: string): void
    onState?(frame: StateFrame): void
    onResult?(frame: ResultFrame): void
    onError?(message: string): void
    /** Socket dropped mid-session: offer the user a reconnect. */
    onClosed?(): void
}

export class PlaytestClient {
    sessionId: string | null = null
    finished = false

    constructor(private readonly socket: SocketLike,
                private readonly hooks: ClientHooks) {
        socket.onmessage = (ev) => {
            if (typeof ev.data === 'string') this.dispatch(ev.data)
        }
        socket.onclose = () => {
            if (!this.finished) this.hooks.onClosed?.()
        }
    }

    start(genome: number[], humanSide: 1 | 2, seed?: number, enemy?: number): void {
        this.socket.send(JSON.stringify(buildStartFrame(genome, humanSide, seed, enemy)))
    }

    resume(sessionId: string): void {
        this.socket.send(JSON.stringify({ type: 'resume', sessionId }))
    }

    sendAction(frame: ActionFrame): void {
        this.socket.send(JSON.stringify(frame))
    }

    close(): void {
        this.finished = true
        this.socket.close()
    }

    private dispatch(raw: string): void {
        const frame = parseServerFrame(raw)
        if (frame === null) {
            this.hooks.onError?.('unreadable server frame')
            return
        }
        switch (frame.type) {
            case 'session':
                this.sessionId = frame.id
                this.hooks.onSession?.(frame.id)
                break
            case 'state':
                this.hooks.onState?.(frame)
                break
            case 'result':
                this.finished = true
                this.hooks.onResult?.(frame)
                break
            case 'error':
                this.hooks.onError?.(frame.message)
                break
        }
    }
}
